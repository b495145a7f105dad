// Page bootstrap: wires the DOM controls and pointer events to the
// headless model and the canvas renderer.

import { ApiClient } from './api.js';
import { AVERAGE_KINDS, AppModel, AverageKind, PlotType } from './app.js';

const WHEEL_ZOOM_FACTOR = 0.9; // wheel-up zooms in

function element<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function bootstrap(): Promise<void> {
  const { ChartView } = await import('./chart.js');
  const api = new ApiClient('');
  const model = new AppModel(api);
  const canvas = element<HTMLCanvasElement>('chart');
  const chart = new ChartView(canvas, model);
  const status = element<HTMLElement>('status');

  const redraw = () => chart.render();

  const report = (error: unknown) => {
    status.textContent = error instanceof Error ? error.message : String(error);
  };

  const busy = async (work: () => Promise<void>) => {
    status.textContent = '';
    try {
      await work();
      if (model.stale) status.textContent = 'showing stale cached data (refresh failed)';
    } catch (error) {
      report(error);
    }
    redraw();
  };

  try {
    await model.init();
  } catch {
    // service default stays at the built-in value when unreachable
  }
  for (const kind of AVERAGE_KINDS) {
    element<HTMLInputElement>(`period-${kind}`).value = String(model.periods[kind]);
  }

  element<HTMLInputElement>('file-input').addEventListener('change', (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const name = file.name.replace(/\.csv$/i, '') || 'upload';
    void busy(() => model.uploadCsv(name, file));
  });

  element<HTMLButtonElement>('load-symbol').addEventListener('click', () => {
    const symbol = element<HTMLInputElement>('symbol-input').value.trim();
    if (symbol) void busy(() => model.loadSymbol(symbol));
  });

  element<HTMLSelectElement>('plot-type').addEventListener('change', (event) => {
    model.plotType = (event.target as HTMLSelectElement).value as PlotType;
    redraw();
  });

  for (const kind of AVERAGE_KINDS) {
    element<HTMLInputElement>(`period-${kind}`).addEventListener('change', (event) => {
      const period = Number((event.target as HTMLInputElement).value);
      if (Number.isInteger(period) && period >= 1) {
        void busy(() => model.setPeriod(kind as AverageKind, period));
      }
    });
  }

  let dragging: { x: number; y: number } | null = null;

  canvas.addEventListener('pointerdown', (event) => {
    dragging = { x: event.offsetX, y: event.offsetY };
    canvas.setPointerCapture(event.pointerId);
  });

  canvas.addEventListener('pointermove', (event) => {
    if (dragging) {
      const delta = chart.pixelDeltaToData(
        event.offsetX - dragging.x,
        event.offsetY - dragging.y,
      );
      model.pan({ dx: -delta.dx, dy: -delta.dy }); // content follows the pointer
      dragging = { x: event.offsetX, y: event.offsetY };
    }
    chart.setPointer({ x: event.offsetX, y: event.offsetY });
    model.moveCursor(chart.pixelToData(event.offsetX, event.offsetY).x);
    redraw();
  });

  canvas.addEventListener('pointerup', (event) => {
    dragging = null;
    canvas.releasePointerCapture(event.pointerId);
  });

  canvas.addEventListener('pointerleave', () => {
    dragging = null;
    chart.setPointer(null);
    redraw();
  });

  canvas.addEventListener(
    'wheel',
    (event) => {
      event.preventDefault();
      const factor = event.deltaY < 0 ? WHEEL_ZOOM_FACTOR : 1 / WHEEL_ZOOM_FACTOR;
      const anchor = chart.pixelToData(event.offsetX, event.offsetY);
      model.zoom(anchor, factor, event.ctrlKey); // Ctrl scales only the Y axis
      redraw();
    },
    { passive: false },
  );

  redraw();
}

void bootstrap();
