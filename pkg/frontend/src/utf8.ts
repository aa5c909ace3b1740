/** Conversions between the server's UTF-8 byte offsets and JS string
 * indices (UTF-16 code units). The server never sees these; the editor
 * never sees bytes. */

function codePointUtf8Length(cp: number): number {
  if (cp < 0x80) return 1;
  if (cp < 0x800) return 2;
  if (cp < 0x10000) return 3;
  return 4;
}

/** JS string index corresponding to a UTF-8 byte offset (clamped). */
export function byteToCharIndex(text: string, byteOffset: number): number {
  let bytes = 0;
  let index = 0;
  while (index < text.length) {
    if (bytes >= byteOffset) return index;
    const cp = text.codePointAt(index);
    if (cp === undefined) break;
    bytes += codePointUtf8Length(cp);
    index += cp > 0xffff ? 2 : 1;
  }
  return index;
}

/** UTF-8 byte offset of a JS string index (clamped to the text). */
export function charToByteIndex(text: string, charIndex: number): number {
  let bytes = 0;
  let index = 0;
  const limit = Math.min(charIndex, text.length);
  while (index < limit) {
    const cp = text.codePointAt(index);
    if (cp === undefined) break;
    bytes += codePointUtf8Length(cp);
    index += cp > 0xffff ? 2 : 1;
  }
  return bytes;
}
