/** Dockable tab layout: each tab sits on the left or right side, either
 * side can be minimized, and the arrangement survives reloads through a
 * Storage-like backend (window.localStorage in the browser). */
export const ALL_TABS = ["output", "proofstate", "rules", "explorer"];
const DEFAULT_SIDES = {
    explorer: "left",
    rules: "left",
    output: "right",
    proofstate: "right",
};
export class TabLayout {
    constructor(storage, key = "proofbench.layout") {
        this.storage = storage;
        this.key = key;
        const loaded = this.load();
        this.tabs = loaded.tabs;
        this.minimizedSides = loaded.minimized;
    }
    load() {
        const fallback = {
            tabs: { ...DEFAULT_SIDES },
            minimized: { left: false, right: false },
        };
        const raw = this.storage.getItem(this.key);
        if (raw === null)
            return fallback;
        try {
            const parsed = JSON.parse(raw);
            const tabs = { ...DEFAULT_SIDES };
            for (const tab of ALL_TABS) {
                const side = parsed.tabs?.[tab];
                if (side === "left" || side === "right")
                    tabs[tab] = side;
            }
            return {
                tabs,
                minimized: {
                    left: parsed.minimized?.left === true,
                    right: parsed.minimized?.right === true,
                },
            };
        }
        catch {
            return fallback; // corrupted persistence falls back to defaults
        }
    }
    persist() {
        this.storage.setItem(this.key, JSON.stringify({ tabs: this.tabs, minimized: this.minimizedSides }));
    }
    sideOf(tab) {
        return this.tabs[tab];
    }
    tabsOn(side) {
        return ALL_TABS.filter((tab) => this.tabs[tab] === side);
    }
    moveTab(tab, side) {
        this.tabs[tab] = side;
        this.persist();
    }
    isMinimized(side) {
        return this.minimizedSides[side];
    }
    setMinimized(side, flag) {
        this.minimizedSides[side] = flag;
        this.persist();
    }
    /** Every tab is assigned to exactly one side by construction; exposed
     * for tests asserting the invariant after arbitrary moves. */
    assignment() {
        return { ...this.tabs };
    }
}
