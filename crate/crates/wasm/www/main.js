import init, { workDistributionVsAngle, workBellTemperatureCurve, coplanarChsh } from "./pkg/tempwork_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

function columns(flat, width) {
  const cols = Array.from({ length: width }, () => []);
  for (let i = 0; i < flat.length; i += width) {
    for (let j = 0; j < width; j++) cols[j].push(flat[i + j]);
  }
  return cols;
}

function plot(canvasId, legendId, x, series) {
  const canvas = document.getElementById(canvasId);
  const ctx = canvas.getContext("2d");
  const pad = 40;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  const ys = series.flatMap((s) => s.y);
  let lo = Math.min(...ys);
  let hi = Math.max(...ys);
  if (hi - lo < 1e-9) { lo -= 0.5; hi += 0.5; }
  const x0 = x[0];
  const x1 = x[x.length - 1];
  const px = (v) => pad + ((v - x0) / (x1 - x0)) * w;
  const py = (v) => pad + h - ((v - lo) / (hi - lo)) * h;

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#444";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toPrecision(4), 2, pad + 4);
  ctx.fillText(lo.toPrecision(4), 2, pad + h);
  ctx.fillText(x0.toPrecision(3), pad, pad + h + 14);
  ctx.fillText(x1.toPrecision(3), pad + w - 20, pad + h + 14);

  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.setLineDash(s.dashed ? [5, 4] : []);
    ctx.beginPath();
    s.y.forEach((v, i) => (i === 0 ? ctx.moveTo(px(x[i]), py(v)) : ctx.lineTo(px(x[i]), py(v))));
    ctx.stroke();
  });
  ctx.setLineDash([]);
  document.getElementById(legendId).innerHTML = series
    .map((s, k) => (s.label ? `<span style="color:${COLORS[k % COLORS.length]}">&#9632; ${s.label}</span>` : ""))
    .join("");
}

const value = (id) => parseFloat(document.getElementById(id).value);

function show(id) {
  document.getElementById(`${id}-out`).textContent = document.getElementById(id).value;
}

function guarded(f) {
  return () => {
    try {
      f();
      document.getElementById("error").textContent = "";
    } catch (e) {
      document.getElementById("error").textContent = String(e.message ?? e);
    }
  };
}

const drawWorkDistribution = guarded(() => {
  ["wd-e", "wd-ef", "wd-beta"].forEach(show);
  const c = columns(workDistributionVsAngle(value("wd-e"), value("wd-ef"), value("wd-beta"), 121), 6);
  plot("wd-plot", "wd-legend", c[0], [
    { label: "p(+,+)", y: c[1] },
    { label: "p(+,-)", y: c[2] },
    { label: "p(-,+)", y: c[3] },
    { label: "p(-,-)", y: c[4] },
    { label: "<W>", y: c[5], dashed: true },
  ]);
});

const drawWorkBell = guarded(() => {
  ["wb-order", "wb-e"].forEach(show);
  const c = columns(workBellTemperatureCurve(value("wb-order"), value("wb-e"), 5, 101), 6);
  plot("wb-plot", "wb-legend", c[0], [
    { label: "optimal axes", y: c[1] },
    { label: "classical lower", y: c[2], dashed: true },
    { label: "classical upper", y: c[3], dashed: true },
    { label: "quantum lower", y: c[4], dashed: true },
    { label: "quantum upper", y: c[5], dashed: true },
  ]);
});

const drawChsh = guarded(() => {
  ["ch-a2", "ch-db"].forEach(show);
  const c = columns(coplanarChsh(value("ch-a2"), value("ch-db"), 241), 4);
  const neg = (ys) => ys.map((v) => -v);
  plot("ch-plot", "ch-legend", c[0], [
    { label: "S vs b1 angle", y: c[1] },
    { label: "classical +-2", y: c[2], dashed: true },
    { label: "", y: neg(c[2]), dashed: true },
    { label: "Tsirelson +-2sqrt2", y: c[3], dashed: true },
    { label: "", y: neg(c[3]), dashed: true },
  ]);
});

await init();
for (const [ids, draw] of [
  [["wd-e", "wd-ef", "wd-beta"], drawWorkDistribution],
  [["wb-order", "wb-e"], drawWorkBell],
  [["ch-a2", "ch-db"], drawChsh],
]) {
  ids.forEach((id) => document.getElementById(id).addEventListener("input", draw));
  draw();
}
