/** Calendar helpers over ISO yyyy-mm-dd strings, all UTC-based. */

const DAY_MS = 86_400_000;

export function toUtcMs(iso: string): number {
  const match = /^(\d{4})-(\d{2})-(\d{2})$/.exec(iso);
  if (!match) throw new Error(`not an ISO date: ${iso}`);
  return Date.UTC(Number(match[1]), Number(match[2]) - 1, Number(match[3]));
}

/** Whole days from a to b (negative when b is earlier). */
export function daysBetween(a: string, b: string): number {
  return Math.round((toUtcMs(b) - toUtcMs(a)) / DAY_MS);
}

export function addDays(iso: string, days: number): string {
  const d = new Date(toUtcMs(iso) + days * DAY_MS);
  return d.toISOString().slice(0, 10);
}

/** MM/DD/YY, the compact form used on marker labels and the review list. */
export function shortDate(iso: string): string {
  const [y, m, d] = iso.split("-");
  return `${m}/${d}/${(y ?? "").slice(2)}`;
}

export function compareDates(a: string, b: string): number {
  return a < b ? -1 : a > b ? 1 : 0;
}
