/** Dockable tab layout: each tab sits on the left or right side, either
 * side can be minimized, and the arrangement survives reloads through a
 * Storage-like backend (window.localStorage in the browser). */

export type TabName = "output" | "proofstate" | "rules" | "explorer";
export type Side = "left" | "right";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export const ALL_TABS: readonly TabName[] = ["output", "proofstate", "rules", "explorer"];

const DEFAULT_SIDES: Record<TabName, Side> = {
  explorer: "left",
  rules: "left",
  output: "right",
  proofstate: "right",
};

interface Persisted {
  tabs: Record<TabName, Side>;
  minimized: Record<Side, boolean>;
}

export class TabLayout {
  private tabs: Record<TabName, Side>;
  private minimizedSides: Record<Side, boolean>;

  constructor(
    private readonly storage: StorageLike,
    private readonly key: string = "proofbench.layout",
  ) {
    const loaded = this.load();
    this.tabs = loaded.tabs;
    this.minimizedSides = loaded.minimized;
  }

  private load(): Persisted {
    const fallback: Persisted = {
      tabs: { ...DEFAULT_SIDES },
      minimized: { left: false, right: false },
    };
    const raw = this.storage.getItem(this.key);
    if (raw === null) return fallback;
    try {
      const parsed = JSON.parse(raw) as Partial<Persisted>;
      const tabs = { ...DEFAULT_SIDES };
      for (const tab of ALL_TABS) {
        const side = parsed.tabs?.[tab];
        if (side === "left" || side === "right") tabs[tab] = side;
      }
      return {
        tabs,
        minimized: {
          left: parsed.minimized?.left === true,
          right: parsed.minimized?.right === true,
        },
      };
    } catch {
      return fallback; // corrupted persistence falls back to defaults
    }
  }

  private persist(): void {
    this.storage.setItem(
      this.key,
      JSON.stringify({ tabs: this.tabs, minimized: this.minimizedSides }),
    );
  }

  sideOf(tab: TabName): Side {
    return this.tabs[tab];
  }

  tabsOn(side: Side): TabName[] {
    return ALL_TABS.filter((tab) => this.tabs[tab] === side);
  }

  moveTab(tab: TabName, side: Side): void {
    this.tabs[tab] = side;
    this.persist();
  }

  isMinimized(side: Side): boolean {
    return this.minimizedSides[side];
  }

  setMinimized(side: Side, flag: boolean): void {
    this.minimizedSides[side] = flag;
    this.persist();
  }

  /** Every tab is assigned to exactly one side by construction; exposed
   * for tests asserting the invariant after arbitrary moves. */
  assignment(): Record<TabName, Side> {
    return { ...this.tabs };
  }
}
