/** Cosmetic syntax highlighting for code snippets.
 *
 * Purely presentational: a light regex scan that wraps keywords, strings,
 * numbers, and comments in classed spans. It never needs to be correct,
 * only safe, so every slice of the input is HTML-escaped on the way out.
 */

const KEYWORDS = new Set([
  "async", "await", "break", "case", "catch", "class", "const", "continue",
  "default", "delete", "do", "else", "export", "extends", "false", "finally",
  "for", "function", "if", "import", "in", "instanceof", "let", "new", "null",
  "of", "return", "static", "switch", "this", "throw", "true", "try",
  "typeof", "undefined", "var", "void", "while", "yield",
]);

const TOKEN = new RegExp(
  [
    String.raw`(?<comment>\/\/[^\n]*|\/\*[\s\S]*?\*\/)`,
    String.raw`(?<string>'(?:[^'\\\n]|\\.)*'|"(?:[^"\\\n]|\\.)*"|` +
      "`(?:[^`\\\\]|\\\\.)*`)",
    String.raw`(?<number>\b\d+(?:\.\d+)?\b)`,
    String.raw`(?<word>[A-Za-z_$][\w$]*)`,
  ].join("|"),
  "g",
);

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

/** Render source text as highlighted HTML. */
export function highlight(code: string): string {
  let out = "";
  let last = 0;
  for (const m of code.matchAll(TOKEN)) {
    const idx = m.index ?? 0;
    out += escapeHtml(code.slice(last, idx));
    const groups = m.groups ?? {};
    const text = m[0];
    if (groups["comment"] !== undefined) {
      out += `<span class="tok-comment">${escapeHtml(text)}</span>`;
    } else if (groups["string"] !== undefined) {
      out += `<span class="tok-string">${escapeHtml(text)}</span>`;
    } else if (groups["number"] !== undefined) {
      out += `<span class="tok-number">${escapeHtml(text)}</span>`;
    } else if (KEYWORDS.has(text)) {
      out += `<span class="tok-keyword">${escapeHtml(text)}</span>`;
    } else {
      out += escapeHtml(text);
    }
    last = idx + text.length;
  }
  out += escapeHtml(code.slice(last));
  return out;
}
