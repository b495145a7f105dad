// Headless application model: everything the chart shows except the
// pixels. Keeping it DOM-free lets the interaction contract run against
// a live service in tests.

import { ApiClient, FrameRow, IndicatorInfo } from './api.js';
import {
  ViewportState,
  autoViewport,
  panViewport,
  snapCursor,
  zoomViewport,
} from './viewport.js';

export type PlotType = 'line' | 'candle' | 'ohlc';

export type AverageKind = 'sma' | 'wma' | 'ema';

export const AVERAGE_KINDS: readonly AverageKind[] = ['sma', 'wma', 'ema'];

export interface ReadoutEntry {
  label: string;
  text: string;
}

export interface Readout {
  date: string;
  columns: ReadoutEntry[];
  indicators: ReadoutEntry[];
}

/** Undefined (warm-up) slots render as an em dash in the readout. */
export function formatValue(value: number | null | undefined): string {
  if (value === null || value === undefined || !Number.isFinite(value)) return '—';
  return String(value);
}

export class AppModel {
  frameName: string | null = null;
  rows: FrameRow[] = [];
  columns: string[] = [];
  indicators: IndicatorInfo[] = [];
  plotType: PlotType = 'line';
  periods: Record<AverageKind, number> = { sma: 20, wma: 20, ema: 20 };
  viewport: ViewportState = autoViewport(0, 0, 1);
  cursorIndex: number | null = null;
  stale = false;

  private indicatorRequestSeq = 0;

  constructor(private readonly api: ApiClient) {}

  get rowCount(): number {
    return this.rows.length;
  }

  /** Seed all three period inputs from the service's default. */
  async init(): Promise<void> {
    const config = await this.api.getConfig();
    for (const kind of AVERAGE_KINDS) this.periods[kind] = config.default_period;
  }

  async uploadCsv(name: string, csv: Blob | string): Promise<void> {
    await this.api.uploadFrame(name, csv);
    await this.showFrame(name);
  }

  async loadSymbol(symbol: string): Promise<void> {
    const summary = await this.api.fetchQuote(symbol);
    this.stale = summary.stale ?? false;
    await this.showFrame(summary.name);
  }

  async showFrame(name: string): Promise<void> {
    const data = await this.api.frameRows(name);
    this.frameName = name;
    this.rows = data.rows;
    this.columns = data.columns;
    this.cursorIndex = null;
    this.resetViewport();
    await this.refreshIndicators();
  }

  specString(): string {
    return AVERAGE_KINDS.map((kind) => `${kind}:${this.periods[kind]}`).join(',');
  }

  /**
   * Re-request indicator arrays; stale responses never overwrite newer
   * ones (latest-wins on the request sequence number).
   */
  async refreshIndicators(): Promise<void> {
    if (this.frameName === null) return;
    const seq = ++this.indicatorRequestSeq;
    const response = await this.api.indicators(this.frameName, this.specString());
    if (seq !== this.indicatorRequestSeq) return;
    this.indicators = response.indicators;
  }

  async setPeriod(kind: AverageKind, period: number): Promise<void> {
    this.periods[kind] = period;
    await this.refreshIndicators();
  }

  legendLabels(): string[] {
    return this.indicators.map((item) => item.label);
  }

  resetViewport(): void {
    let min = Infinity;
    let max = -Infinity;
    for (const row of this.rows) {
      for (const column of this.columns) {
        const value = row[column];
        if (typeof value === 'number') {
          min = Math.min(min, value);
          max = Math.max(max, value);
        }
      }
    }
    if (!Number.isFinite(min)) {
      min = 0;
      max = 1;
    }
    this.viewport = autoViewport(this.rowCount, min, max);
  }

  moveCursor(pointerX: number): number | null {
    this.cursorIndex = snapCursor(pointerX, this.viewport, this.rowCount);
    return this.cursorIndex;
  }

  zoom(anchor: { x: number; y: number }, factor: number, yOnly: boolean): void {
    this.viewport = zoomViewport(this.viewport, anchor, factor, yOnly, this.rowCount);
  }

  pan(delta: { dx: number; dy: number }): void {
    this.viewport = panViewport(this.viewport, delta, this.rowCount);
  }

  /** Date, column values, and indicator values at one snapped index. */
  readoutAt(index: number): Readout | null {
    const row = this.rows[index];
    if (!row) return null;
    return {
      date: row.date,
      columns: this.columns.map((name) => ({
        label: name,
        text: formatValue(row[name] as number | null),
      })),
      indicators: this.indicators.map((item) => ({
        label: item.label,
        text: formatValue(item.values[index]),
      })),
    };
  }
}
