/**
 * Canvas client: load an image, paint color scribbles over its gray
 * version, and steer the L1/L2 preview loop.
 */

import { PreviewClient, type PreviewResult } from "./api.js";
import { hexToRgb, luminance } from "./color.js";
import { PreviewLoop, type Method } from "./preview.js";
import { strokesToScribbles, type BrushStroke } from "./strokes.js";

const SERVICE_URL = (window as { L1COLOR_SERVICE?: string }).L1COLOR_SERVICE
  ?? "http://127.0.0.1:8000";

const app = document.getElementById("app")!;
app.innerHTML = `
  <div class="toolbar">
    <input type="file" id="file" accept="image/png,image/jpeg" />
    <label>color <input type="color" id="color" value="#d03020" /></label>
    <label>radius <input type="range" id="radius" min="1" max="12" value="3" /></label>
    <button id="undo" disabled>undo</button>
    <label><input type="radio" name="method" value="l1" checked /> L1</label>
    <label><input type="radio" name="method" value="l2" /> L2</label>
    <button id="preview" disabled>preview</button>
    <button id="full" disabled>full resolution</button>
  </div>
  <div class="panes">
    <canvas id="paint"></canvas>
    <canvas id="result"></canvas>
  </div>
  <div id="status" class="status">load an image to begin</div>
`;

const fileInput = document.getElementById("file") as HTMLInputElement;
const colorInput = document.getElementById("color") as HTMLInputElement;
const radiusInput = document.getElementById("radius") as HTMLInputElement;
const undoButton = document.getElementById("undo") as HTMLButtonElement;
const previewButton = document.getElementById("preview") as HTMLButtonElement;
const fullButton = document.getElementById("full") as HTMLButtonElement;
const paintCanvas = document.getElementById("paint") as HTMLCanvasElement;
const resultCanvas = document.getElementById("result") as HTMLCanvasElement;
const statusBar = document.getElementById("status") as HTMLDivElement;

const client = new PreviewClient(SERVICE_URL);

let gray: ImageData | null = null;
let strokes: BrushStroke[] = [];
let activeStroke: BrushStroke | null = null;
let loop: PreviewLoop | null = null;
let sessionId: string | null = null;

function setStatus(message: string): void {
  statusBar.textContent = message;
}

function grayFromImage(img: HTMLImageElement): ImageData {
  const ctx = paintCanvas.getContext("2d")!;
  paintCanvas.width = img.naturalWidth;
  paintCanvas.height = img.naturalHeight;
  resultCanvas.width = img.naturalWidth;
  resultCanvas.height = img.naturalHeight;
  ctx.drawImage(img, 0, 0);
  const data = ctx.getImageData(0, 0, paintCanvas.width, paintCanvas.height);
  for (let i = 0; i < data.data.length; i += 4) {
    const yv = Math.round(
      255 * luminance(data.data[i]! / 255, data.data[i + 1]! / 255, data.data[i + 2]! / 255),
    );
    data.data[i] = data.data[i + 1] = data.data[i + 2] = yv;
  }
  return data;
}

function redrawPaintCanvas(): void {
  if (!gray) {
    return;
  }
  const ctx = paintCanvas.getContext("2d")!;
  ctx.putImageData(gray, 0, 0);
  for (const stroke of strokes.concat(activeStroke ? [activeStroke] : [])) {
    ctx.strokeStyle = ctx.fillStyle = `rgb(${Math.round(stroke.color.r * 255)}, ${Math.round(
      stroke.color.g * 255,
    )}, ${Math.round(stroke.color.b * 255)})`;
    ctx.lineWidth = stroke.radius * 2;
    ctx.lineCap = ctx.lineJoin = "round";
    const [first, ...rest] = stroke.points;
    if (!first) {
      continue;
    }
    ctx.beginPath();
    ctx.moveTo(first.x, first.y);
    for (const p of rest) {
      ctx.lineTo(p.x, p.y);
    }
    ctx.stroke();
    if (rest.length === 0) {
      ctx.beginPath();
      ctx.arc(first.x, first.y, stroke.radius, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

function renderResult(result: PreviewResult, method: Method): void {
  if (!result.png) {
    return;
  }
  const img = new Image();
  img.onload = () => {
    resultCanvas.getContext("2d")!.drawImage(img, 0, 0);
    resultCanvas.title = `${method} result`;
  };
  img.src = `data:image/png;base64,${result.png}`;
}

async function pushScribbles(): Promise<void> {
  if (!loop || !sessionId || strokes.length === 0) {
    return;
  }
  try {
    const scribbles = strokesToScribbles(strokes, paintCanvas.width, paintCanvas.height);
    await client.putScribbles(sessionId, scribbles);
    previewButton.disabled = false;
    fullButton.disabled = false;
    loop.scribblesChanged();
  } catch (err) {
    setStatus(String(err));
  }
}

fileInput.addEventListener("change", () => {
  const file = fileInput.files?.[0];
  if (!file) {
    return;
  }
  const reader = new FileReader();
  reader.onload = async () => {
    const dataUrl = reader.result as string;
    const img = new Image();
    img.onload = async () => {
      gray = grayFromImage(img);
      strokes = [];
      undoButton.disabled = true;
      previewButton.disabled = true;
      fullButton.disabled = true;
      redrawPaintCanvas();
      try {
        const base64 = dataUrl.slice(dataUrl.indexOf(",") + 1);
        const session = await client.createSession(base64);
        sessionId = session.id;
        loop = new PreviewLoop(client, session.id, { render: renderResult, status: setStatus });
        setStatus(`session ${session.id.slice(0, 8)}: paint scribbles, then preview`);
      } catch (err) {
        setStatus(String(err));
      }
    };
    img.src = dataUrl;
  };
  reader.readAsDataURL(file);
});

function canvasPoint(ev: MouseEvent): { x: number; y: number } {
  const rect = paintCanvas.getBoundingClientRect();
  return {
    x: Math.min(paintCanvas.width - 1, Math.max(0, Math.round(ev.clientX - rect.left))),
    y: Math.min(paintCanvas.height - 1, Math.max(0, Math.round(ev.clientY - rect.top))),
  };
}

paintCanvas.addEventListener("mousedown", (ev) => {
  if (!gray || !sessionId) {
    return;
  }
  activeStroke = {
    points: [canvasPoint(ev)],
    color: hexToRgb(colorInput.value),
    radius: Number(radiusInput.value),
  };
  redrawPaintCanvas();
});

paintCanvas.addEventListener("mousemove", (ev) => {
  if (!activeStroke) {
    return;
  }
  activeStroke.points.push(canvasPoint(ev));
  redrawPaintCanvas();
});

window.addEventListener("mouseup", () => {
  if (!activeStroke) {
    return;
  }
  strokes.push(activeStroke);
  activeStroke = null;
  undoButton.disabled = false;
  redrawPaintCanvas();
  void pushScribbles();
});

undoButton.addEventListener("click", () => {
  strokes.pop();
  undoButton.disabled = strokes.length === 0;
  redrawPaintCanvas();
  if (strokes.length > 0) {
    void pushScribbles();
  } else {
    previewButton.disabled = true;
    fullButton.disabled = true;
    setStatus("no scribbles");
  }
});

for (const radio of document.querySelectorAll<HTMLInputElement>("input[name=method]")) {
  radio.addEventListener("change", () => {
    loop?.setMethod(radio.value as Method);
  });
}

previewButton.addEventListener("click", () => {
  void loop?.refresh();
});

fullButton.addEventListener("click", () => {
  void loop?.requestFull();
});
