// Canvas renderer. Pulls everything it draws from the AppModel; the only
// logic here is coordinate mapping.

import { AppModel } from './app.js';
import { ViewportState } from './viewport.js';

const COLORS = {
  background: '#ffffff',
  grid: '#e8e8e8',
  axis: '#9a9a9a',
  text: '#303030',
  price: '#303030',
  up: '#1a9641',
  down: '#d7191c',
  cursor: '#5555cc',
  readoutBg: 'rgba(255,255,255,0.92)',
  readoutBorder: '#bbbbbb',
  series: ['#1f77b4', '#ff7f0e', '#2ca02c', '#9467bd', '#8c564b'],
} as const;

const MARGIN = { left: 56, right: 16, top: 12, bottom: 34 };

export class ChartView {
  private pointer: { x: number; y: number } | null = null;

  constructor(
    private readonly canvas: HTMLCanvasElement,
    private readonly model: AppModel,
  ) {}

  setPointer(position: { x: number; y: number } | null): void {
    this.pointer = position;
  }

  get plotWidth(): number {
    return this.canvas.clientWidth - MARGIN.left - MARGIN.right;
  }

  get plotHeight(): number {
    return this.canvas.clientHeight - MARGIN.top - MARGIN.bottom;
  }

  xToPixel(x: number, view: ViewportState): number {
    const [x0, x1] = view.xRange;
    return MARGIN.left + ((x - x0) / (x1 - x0)) * this.plotWidth;
  }

  yToPixel(y: number, view: ViewportState): number {
    const [y0, y1] = view.yRange;
    return MARGIN.top + (1 - (y - y0) / (y1 - y0)) * this.plotHeight;
  }

  pixelToData(px: number, py: number): { x: number; y: number } {
    const view = this.model.viewport;
    const [x0, x1] = view.xRange;
    const [y0, y1] = view.yRange;
    return {
      x: x0 + ((px - MARGIN.left) / this.plotWidth) * (x1 - x0),
      y: y0 + (1 - (py - MARGIN.top) / this.plotHeight) * (y1 - y0),
    };
  }

  pixelDeltaToData(dx: number, dy: number): { dx: number; dy: number } {
    const view = this.model.viewport;
    return {
      dx: (dx / this.plotWidth) * (view.xRange[1] - view.xRange[0]),
      dy: (-dy / this.plotHeight) * (view.yRange[1] - view.yRange[0]),
    };
  }

  render(): void {
    const ctx = this.canvas.getContext('2d');
    if (!ctx) return;
    const dpr = window.devicePixelRatio || 1;
    const width = this.canvas.clientWidth;
    const height = this.canvas.clientHeight;
    if (this.canvas.width !== width * dpr || this.canvas.height !== height * dpr) {
      this.canvas.width = width * dpr;
      this.canvas.height = height * dpr;
    }
    ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
    ctx.fillStyle = COLORS.background;
    ctx.fillRect(0, 0, width, height);

    if (this.model.rowCount === 0) {
      ctx.fillStyle = COLORS.axis;
      ctx.font = '14px system-ui, sans-serif';
      ctx.textAlign = 'center';
      ctx.fillText('no data loaded', width / 2, height / 2);
      return;
    }

    const view = this.model.viewport;
    ctx.save();
    this.drawGrid(ctx, view);
    ctx.beginPath();
    ctx.rect(MARGIN.left, MARGIN.top, this.plotWidth, this.plotHeight);
    ctx.clip();
    this.drawPrice(ctx, view);
    this.drawIndicators(ctx, view);
    this.drawCursor(ctx, view);
    ctx.restore();
    this.drawLegend(ctx);
    this.drawReadout(ctx);
  }

  private visibleIndices(view: ViewportState): [number, number] {
    const lo = Math.max(0, Math.floor(view.xRange[0]) - 1);
    const hi = Math.min(this.model.rowCount - 1, Math.ceil(view.xRange[1]) + 1);
    return [lo, hi];
  }

  private column(name: string, index: number): number | null {
    const value = this.model.rows[index]?.[name];
    return typeof value === 'number' ? value : null;
  }

  private drawGrid(ctx: CanvasRenderingContext2D, view: ViewportState): void {
    ctx.strokeStyle = COLORS.grid;
    ctx.fillStyle = COLORS.text;
    ctx.font = '11px system-ui, sans-serif';
    ctx.lineWidth = 1;

    const [y0, y1] = view.yRange;
    const ySteps = 5;
    ctx.textAlign = 'right';
    for (let i = 0; i <= ySteps; i++) {
      const value = y0 + ((y1 - y0) * i) / ySteps;
      const py = this.yToPixel(value, view);
      ctx.beginPath();
      ctx.moveTo(MARGIN.left, py);
      ctx.lineTo(MARGIN.left + this.plotWidth, py);
      ctx.stroke();
      ctx.fillText(value.toPrecision(5), MARGIN.left - 6, py + 4);
    }

    const [lo, hi] = this.visibleIndices(view);
    const step = Math.max(1, Math.ceil((hi - lo + 1) / 8));
    ctx.textAlign = 'center';
    for (let i = lo; i <= hi; i += step) {
      const px = this.xToPixel(i, view);
      const date = this.model.rows[i]?.date ?? '';
      ctx.fillText(date, px, MARGIN.top + this.plotHeight + 16);
    }
  }

  private drawPrice(ctx: CanvasRenderingContext2D, view: ViewportState): void {
    const [lo, hi] = this.visibleIndices(view);
    if (this.model.plotType === 'line') {
      ctx.strokeStyle = COLORS.price;
      ctx.lineWidth = 1.4;
      ctx.beginPath();
      let started = false;
      for (let i = lo; i <= hi; i++) {
        const value = this.column('Close', i);
        if (value === null) {
          started = false;
          continue;
        }
        const px = this.xToPixel(i, view);
        const py = this.yToPixel(value, view);
        if (started) ctx.lineTo(px, py);
        else ctx.moveTo(px, py);
        started = true;
      }
      ctx.stroke();
      return;
    }

    const pixelsPerIndex =
      this.plotWidth / Math.max(1, view.xRange[1] - view.xRange[0]);
    const half = Math.max(1, Math.min(8, pixelsPerIndex * 0.3));
    for (let i = lo; i <= hi; i++) {
      const open = this.column('Open', i);
      const high = this.column('High', i);
      const low = this.column('Low', i);
      const close = this.column('Close', i);
      if (open === null || high === null || low === null || close === null) continue;
      const color = close >= open ? COLORS.up : COLORS.down;
      const px = this.xToPixel(i, view);
      ctx.strokeStyle = color;
      ctx.fillStyle = color;
      ctx.lineWidth = 1.2;
      ctx.beginPath();
      ctx.moveTo(px, this.yToPixel(low, view));
      ctx.lineTo(px, this.yToPixel(high, view));
      ctx.stroke();
      if (this.model.plotType === 'candle') {
        const top = this.yToPixel(Math.max(open, close), view);
        const bottom = this.yToPixel(Math.min(open, close), view);
        ctx.fillRect(px - half, top, half * 2, Math.max(1, bottom - top));
      } else {
        ctx.beginPath();
        ctx.moveTo(px - half, this.yToPixel(open, view));
        ctx.lineTo(px, this.yToPixel(open, view));
        ctx.moveTo(px, this.yToPixel(close, view));
        ctx.lineTo(px + half, this.yToPixel(close, view));
        ctx.stroke();
      }
    }
  }

  private drawIndicators(ctx: CanvasRenderingContext2D, view: ViewportState): void {
    const [lo, hi] = this.visibleIndices(view);
    this.model.indicators.forEach((item, n) => {
      ctx.strokeStyle = COLORS.series[n % COLORS.series.length];
      ctx.lineWidth = 1.2;
      ctx.beginPath();
      let started = false;
      for (let i = lo; i <= hi; i++) {
        const value = item.values[i];
        if (value === null || value === undefined) {
          started = false; // skip warm-up and gap slots
          continue;
        }
        const px = this.xToPixel(i, view);
        const py = this.yToPixel(value, view);
        if (started) ctx.lineTo(px, py);
        else ctx.moveTo(px, py);
        started = true;
      }
      ctx.stroke();
    });
  }

  private drawCursor(ctx: CanvasRenderingContext2D, view: ViewportState): void {
    const index = this.model.cursorIndex;
    if (index === null) return;
    const px = this.xToPixel(index, view);
    ctx.strokeStyle = COLORS.cursor;
    ctx.lineWidth = 1;
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.moveTo(px, MARGIN.top);
    ctx.lineTo(px, MARGIN.top + this.plotHeight);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  private drawLegend(ctx: CanvasRenderingContext2D): void {
    const labels = this.model.legendLabels();
    ctx.font = '12px system-ui, sans-serif';
    ctx.textAlign = 'left';
    let y = MARGIN.top + 14;
    labels.forEach((label, n) => {
      const x = MARGIN.left + 10;
      ctx.strokeStyle = COLORS.series[n % COLORS.series.length];
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(x, y - 4);
      ctx.lineTo(x + 18, y - 4);
      ctx.stroke();
      ctx.fillStyle = COLORS.text;
      ctx.fillText(label, x + 24, y);
      y += 16;
    });
  }

  private drawReadout(ctx: CanvasRenderingContext2D): void {
    const index = this.model.cursorIndex;
    if (index === null || !this.pointer) return;
    const readout = this.model.readoutAt(index);
    if (!readout) return;
    const lines = [
      readout.date,
      ...readout.columns.map((entry) => `${entry.label}: ${entry.text}`),
      ...readout.indicators.map((entry) => `${entry.label}: ${entry.text}`),
    ];
    ctx.font = '11px system-ui, sans-serif';
    const boxWidth = Math.max(...lines.map((line) => ctx.measureText(line).width)) + 16;
    const boxHeight = lines.length * 14 + 10;
    // the panel tracks the pointer; the cursor line stays on the date
    let x = this.pointer.x + 14;
    let y = this.pointer.y + 14;
    if (x + boxWidth > this.canvas.clientWidth) x = this.pointer.x - boxWidth - 14;
    if (y + boxHeight > this.canvas.clientHeight) y = this.pointer.y - boxHeight - 14;
    ctx.fillStyle = COLORS.readoutBg;
    ctx.strokeStyle = COLORS.readoutBorder;
    ctx.fillRect(x, y, boxWidth, boxHeight);
    ctx.strokeRect(x, y, boxWidth, boxHeight);
    ctx.fillStyle = COLORS.text;
    ctx.textAlign = 'left';
    lines.forEach((line, n) => {
      ctx.fillText(line, x + 8, y + 18 + n * 14);
    });
  }
}
