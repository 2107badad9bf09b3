// Two sequential single-hue scales: one for leaf cells, a second hue for
// aggregated cells so group values are never mistaken for leaf values. The
// exact palettes are configuration, not contract.

export interface Scale {
  (value: number): string;
}

function mix(from: [number, number, number], to: [number, number, number], t: number): string {
  const ch = (i: number) => Math.round(from[i] + (to[i] - from[i]) * t);
  return `rgb(${ch(0)}, ${ch(1)}, ${ch(2)})`;
}

const LEAF_LOW: [number, number, number] = [239, 243, 255];
const LEAF_HIGH: [number, number, number] = [8, 81, 156];
const AGG_LOW: [number, number, number] = [254, 237, 222];
const AGG_HIGH: [number, number, number] = [166, 54, 3];

export function leafScale(max: number): Scale {
  return (v) => mix(LEAF_LOW, LEAF_HIGH, max > 0 ? Math.min(v / max, 1) : 0);
}

export function aggregateScale(max: number): Scale {
  return (v) => mix(AGG_LOW, AGG_HIGH, max > 0 ? Math.min(v / max, 1) : 0);
}

/** Pale fill used by undefined ("no paths") cells — visually distinct from
 * every scale value, including 0. */
export const UNDEFINED_FILL = '#ffffff';
