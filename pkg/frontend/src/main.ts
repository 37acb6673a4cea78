/**
 * DOM wiring for the ink pad. All state lives in PadSession; this file only
 * routes pointer events in and draws session state out.
 */

import { PadClient } from "./client.js";
import type { Box } from "./geometry.js";
import { criticalPointMarkers, featureRows, tokenSegments, topClasses } from "./overlay.js";
import { PadSession } from "./session.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8787";

function requireEl<T extends Element>(selector: string): T {
  const el = document.querySelector<T>(selector);
  if (el === null) throw new Error(`missing element: ${selector}`);
  return el;
}

const canvas = requireEl<HTMLCanvasElement>("#pad");
const banner = requireEl<HTMLDivElement>("#banner");
const prediction = requireEl<HTMLDivElement>("#prediction");
const featureBody = requireEl<HTMLTableSectionElement>("#features tbody");
const featurePanel = requireEl<HTMLDetailsElement>("#feature-panel");
const clearButton = requireEl<HTMLButtonElement>("#clear");
const baseUrlLabel = requireEl<HTMLSpanElement>("#base-url");

const baseUrl = new URLSearchParams(location.search).get("api") ?? DEFAULT_BASE_URL;
baseUrlLabel.textContent = baseUrl;

const client = new PadClient(baseUrl);

function canvasBox(): Box {
  const rect = canvas.getBoundingClientRect();
  return { width: rect.width, height: rect.height };
}

/** Match the backing store to CSS size times device pixel ratio. */
function fitCanvas(): CanvasRenderingContext2D {
  const box = canvasBox();
  const dpr = window.devicePixelRatio || 1;
  canvas.width = Math.round(box.width * dpr);
  canvas.height = Math.round(box.height * dpr);
  const ctx = canvas.getContext("2d");
  if (ctx === null) throw new Error("2d canvas context unavailable");
  ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  return ctx;
}

let ctx = fitCanvas();
const session = new PadSession(canvasBox(), client, { onChange: redraw });

function drawPolyline(points: readonly { x: number; y: number }[], color: string, width: number) {
  if (points.length === 0) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.lineCap = "round";
  ctx.lineJoin = "round";
  ctx.beginPath();
  ctx.moveTo(points[0]!.x, points[0]!.y);
  for (const p of points.slice(1)) ctx.lineTo(p.x, p.y);
  if (points.length === 1) ctx.lineTo(points[0]!.x + 0.1, points[0]!.y);
  ctx.stroke();
}

function redraw(s: PadSession): void {
  const box = canvasBox();
  ctx.clearRect(0, 0, box.width, box.height);

  for (const stroke of s.strokes) drawPolyline(stroke, "#1f2937", 2.5);
  if (s.current !== null) drawPolyline(s.current, "#6b7280", 2.5);

  if (s.lastResponse !== null) {
    const payload = s.exportPayload();
    if (s.toggles.tokens) {
      for (const seg of tokenSegments(s.lastResponse, payload, box)) {
        drawPolyline(seg.points, seg.color, 5);
      }
    }
    if (s.toggles.criticalPoints) {
      for (const m of criticalPointMarkers(s.lastResponse, payload, box)) {
        ctx.beginPath();
        ctx.arc(m.x, m.y, 6, 0, 2 * Math.PI);
        ctx.fillStyle = m.kind === "max" ? "#dc2626" : "#2563eb";
        ctx.fill();
        ctx.lineWidth = 2;
        ctx.strokeStyle = "#ffffff";
        ctx.stroke();
        ctx.fillStyle = "#111827";
        ctx.font = "11px system-ui, sans-serif";
        ctx.fillText(String(m.index), m.x + 8, m.y - 8);
      }
    }
  }

  banner.textContent = s.banner ?? "";
  banner.hidden = s.banner === null;

  if (s.lastResponse === null) {
    prediction.innerHTML = "<em>draw a character to recognize it</em>";
  } else {
    const r = s.lastResponse;
    const rows = topClasses(r)
      .map(
        (c) =>
          `<li${c.label === r.label ? ' class="best"' : ""}>` +
          `<span class="label">${c.label}</span>` +
          `<span class="bar" style="width: ${Math.round(c.score * 120)}px"></span>` +
          `<span class="score">${c.score.toFixed(3)}</span></li>`,
      )
      .join("");
    prediction.innerHTML =
      `<strong>${r.label}</strong> &middot; confidence ${r.confidence.toFixed(3)} ` +
      `&middot; cluster ${r.cluster_id}<ol>${rows}</ol>`;
  }

  featurePanel.hidden = !s.toggles.features;
  featureBody.replaceChildren(
    ...(s.lastResponse === null
      ? []
      : featureRows(s.lastResponse).map((cells) => {
          const tr = document.createElement("tr");
          for (const cell of cells) {
            const td = document.createElement("td");
            td.textContent = cell;
            tr.append(td);
          }
          return tr;
        })),
  );
}

canvas.addEventListener("pointerdown", (e) => {
  canvas.setPointerCapture(e.pointerId);
  session.pointerDown(e.offsetX, e.offsetY, e.timeStamp);
});
canvas.addEventListener("pointermove", (e) => {
  if (e.buttons === 0) return;
  session.pointerMove(e.offsetX, e.offsetY, e.timeStamp);
});
canvas.addEventListener("pointerup", (e) => {
  void session.pointerUp(e.offsetX, e.offsetY, e.timeStamp);
});

clearButton.addEventListener("click", () => session.clear());

for (const name of ["criticalPoints", "tokens", "features"] as const) {
  const toggle = requireEl<HTMLInputElement>(`#toggle-${name}`);
  toggle.checked = session.toggles[name];
  toggle.addEventListener("change", () => {
    session.toggles[name] = toggle.checked;
    redraw(session);
  });
}

window.addEventListener("resize", () => {
  ctx = fitCanvas();
  redraw(session);
});

void client.health().then((ok) => {
  if (!ok && session.banner === null) {
    session.banner =
      "recognition service not reachable or no model loaded — " +
      "start it with: strokekit serve --models <dir>";
    redraw(session);
  }
});

redraw(session);
