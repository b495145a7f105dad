// Pure viewport math, kept free of any DOM or canvas dependency so the
// whole interaction model is testable headlessly. Coordinates are data
// coordinates: x is the date index (0 .. rowCount - 1), y is price.

export interface ViewportState {
  readonly xRange: readonly [number, number];
  readonly yRange: readonly [number, number];
  readonly mode: 'auto' | 'manual';
}

/** Fraction of the data extent the view may scroll past either end. */
export const OVERSCROLL_FRACTION = 0.1;

export function xBounds(rowCount: number): [number, number] {
  const margin = OVERSCROLL_FRACTION * Math.max(1, rowCount - 1);
  return [-margin, rowCount - 1 + margin];
}

export function autoViewport(rowCount: number, yMin: number, yMax: number): ViewportState {
  const pad = (yMax - yMin || 1) * 0.05;
  return {
    xRange: [-0.5, Math.max(0.5, rowCount - 0.5)],
    yRange: [yMin - pad, yMax + pad],
    mode: 'auto',
  };
}

export function clampViewport(view: ViewportState, rowCount: number): ViewportState {
  if (rowCount === 0) return view;
  const [lo, hi] = xBounds(rowCount);
  let [x0, x1] = view.xRange;
  const span = x1 - x0;
  if (span >= hi - lo) {
    [x0, x1] = [lo, hi];
  } else if (x0 < lo) {
    x1 += lo - x0;
    x0 = lo;
  } else if (x1 > hi) {
    x0 -= x1 - hi;
    x1 = hi;
  }
  if (x0 === view.xRange[0] && x1 === view.xRange[1]) return view;
  return { ...view, xRange: [x0, x1] };
}

/**
 * Nearest visible date index to the pointer's x data-coordinate.
 *
 * Ties at the exact midpoint break toward the lower (earlier) index, and
 * pointers beyond the data clamp to the nearest end. Returns null for an
 * empty frame.
 */
export function snapCursor(
  pointerX: number,
  view: ViewportState,
  rowCount: number,
): number | null {
  if (rowCount === 0) return null;
  let lo = Math.max(0, Math.ceil(view.xRange[0]));
  let hi = Math.min(rowCount - 1, Math.floor(view.xRange[1]));
  if (lo > hi) {
    lo = 0;
    hi = rowCount - 1;
  }
  const nearest = Math.ceil(pointerX - 0.5); // round half toward lower
  return Math.min(hi, Math.max(lo, nearest));
}

/**
 * Scale both ranges about an anchor point; factor 0.5 halves the spans.
 *
 * The anchor's data coordinates keep their screen position. With yOnly
 * set (Ctrl held), the x range is left untouched.
 */
export function zoomViewport(
  view: ViewportState,
  anchor: { x: number; y: number },
  factor: number,
  yOnly: boolean,
  rowCount: number,
): ViewportState {
  if (!(factor > 0)) throw new RangeError(`zoom factor must be positive, got ${factor}`);
  if (factor === 1) return view;
  const scale = (range: readonly [number, number], at: number): [number, number] => [
    at - (at - range[0]) * factor,
    at + (range[1] - at) * factor,
  ];
  const next: ViewportState = {
    xRange: yOnly ? view.xRange : scale(view.xRange, anchor.x),
    yRange: scale(view.yRange, anchor.y),
    mode: 'manual',
  };
  return clampViewport(next, rowCount);
}

/** Translate both ranges by -delta so the content follows the pointer. */
export function panViewport(
  view: ViewportState,
  delta: { dx: number; dy: number },
  rowCount: number,
): ViewportState {
  const next: ViewportState = {
    xRange: [view.xRange[0] - delta.dx, view.xRange[1] - delta.dx],
    yRange: [view.yRange[0] - delta.dy, view.yRange[1] - delta.dy],
    mode: 'manual',
  };
  return clampViewport(next, rowCount);
}
