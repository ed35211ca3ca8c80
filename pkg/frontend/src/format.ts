/** Formatting helpers. */

/** Signed year to archaeological label: -600 -> "600 BC", 79 -> "AD 79". */
export function yearLabel(year: number): string {
  if (year < 0) return `${-year} BC`;
  if (year === 0) return "1 BC"; // no year zero in the historical count
  return `AD ${year}`;
}

export function intervalLabel(from: number, to: number): string {
  return from === to ? yearLabel(from) : `${yearLabel(from)} – ${yearLabel(to)}`;
}
