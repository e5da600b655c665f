import init, { householder_lee_fov, left_right_curves, minimax_curves } from "./pkg/lrgmres_demo.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

// Plot frame shared by the three panels. `ys` may contain nulls (gaps).
function plot(canvas, series, { logY = false, xLabel = "", yLabel = "", equal = false } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 50;
  ctx.clearRect(0, 0, W, H);
  const tf = (y) => (logY ? Math.log10(y) : y);
  let xs = [], ys = [];
  for (const s of series) {
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y != null && Number.isFinite(tf(y))) { xs.push(x); ys.push(tf(y)); }
    });
  }
  let [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (x0 === x1) { x0 -= 1; x1 += 1; }
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  if (equal) {
    const sx = (x1 - x0) / (W - 2 * pad), sy = (y1 - y0) / (H - 2 * pad);
    const s = Math.max(sx, sy);
    const cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    x0 = cx - s * (W - 2 * pad) / 2; x1 = cx + s * (W - 2 * pad) / 2;
    y0 = cy - s * (H - 2 * pad) / 2; y1 = cy + s * (H - 2 * pad) / 2;
  }
  const px = (x) => pad + (x - x0) / (x1 - x0) * (W - 2 * pad);
  const py = (y) => H - pad - (y - y0) / (y1 - y0) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const y = y0 + (y1 - y0) * i / 4;
    ctx.fillText(logY ? `1e${y.toFixed(1)}` : y.toPrecision(3), 2, py(y) + 4);
    const x = x0 + (x1 - x0) * i / 4;
    ctx.fillText(x.toPrecision(3), px(x) - 10, H - pad + 16);
  }
  ctx.fillText(xLabel, W / 2, H - 8);
  ctx.fillText(yLabel, pad, pad - 8);

  series.forEach((s, k) => {
    ctx.strokeStyle = ctx.fillStyle = s.color || COLORS[k % COLORS.length];
    ctx.beginPath();
    let open = false;
    s.x.forEach((x, i) => {
      const y = s.y[i];
      if (y == null || !Number.isFinite(tf(y))) { open = false; return; }
      if (open) ctx.lineTo(px(x), py(tf(y))); else ctx.moveTo(px(x), py(tf(y)));
      open = true;
      if (s.marks) ctx.fillRect(px(x) - 2, py(tf(y)) - 2, 4, 4);
    });
    if (s.closed) ctx.closePath();
    ctx.stroke();
    ctx.fillText(s.label, W - pad - 220, pad + 16 + 16 * k);
  });
}

// Boundary of a convex set from its support function h(theta): the
// intersection of consecutive supporting lines.
function boundary(angles, h) {
  const n = angles.length, xs = [], ys = [];
  for (let i = 0; i < n; i++) {
    const j = (i + 1) % n;
    const [a, b] = [angles[i], angles[j]];
    const det = Math.cos(a) * Math.sin(b) - Math.sin(a) * Math.cos(b);
    xs.push((h[i] * Math.sin(b) - h[j] * Math.sin(a)) / det);
    ys.push((Math.cos(a) * h[j] - Math.cos(b) * h[i]) / det);
  }
  return { x: xs, y: ys };
}

function guard(info, f) {
  info.classList.remove("err");
  try { f(); } catch (e) { info.textContent = String(e); info.classList.add("err"); }
}

function runFov() {
  guard($("fov-info"), () => {
    const v = JSON.parse(householder_lee_fov(num("fov-n"), num("fov-mu"), num("fov-lambda"), num("fov-seed"), 128));
    const ah = boundary(v.angles, v.support_ah), ha = boundary(v.angles, v.support_ha);
    plot($("fov-canvas"), [
      { ...ah, label: "W(AH)", closed: true },
      { ...ha, label: "W(HA)", closed: true },
    ], { equal: true, xLabel: "Re", yLabel: "Im" });
    $("fov-info").textContent =
      `max|I - HA| = ${v.gap_left.toExponential(3)}   max|I - AH| = ${v.gap_right.toExponential(3)}   ratio = ${v.ratio.toExponential(4)}`;
  });
}

function runCurves() {
  guard($("lr-info"), () => {
    const v = JSON.parse(left_right_curves(num("lr-n"), num("lr-k"), num("lr-seed"), num("lr-rtol")));
    const idx = (a) => a.map((_, i) => i);
    plot($("lr-canvas"), [
      { x: idx(v.left_precond), y: v.left_precond, label: "left, ||H r|| / ||H r0||", marks: true },
      { x: idx(v.right_precond), y: v.right_precond, label: "right, ||r|| / ||r0||", marks: true },
      { x: idx(v.left_true), y: v.left_true, label: "left, explicit ||b - A x||" },
      { x: idx(v.right_true), y: v.right_true, label: "right, explicit ||b - A x||" },
    ], { logY: true, xLabel: "iteration", yLabel: "relative residual" });
    $("lr-info").textContent =
      `kappa(X) = ${v.kappa_x.toExponential(3)}   iterations: left ${v.left_iterations}, right ${v.right_iterations}\n${v.sandwich}`;
  });
}

function runMinimax() {
  guard($("mm-info"), () => {
    const v = JSON.parse(minimax_curves(num("mm-lo"), num("mm-hi"), num("mm-m"), num("mm-k")));
    const ks = v.remez.map((_, i) => i);
    plot($("mm-canvas"), [
      { x: ks, y: v.remez, label: "discrete minimax", marks: true },
      { x: ks, y: v.chebyshev, label: "interval Chebyshev" },
    ], { logY: true, xLabel: "k", yLabel: "eps(k)" });
    $("mm-info").textContent = `eps(k) at k = ${ks.length - 1}: ${v.remez.at(-1).toExponential(3)} vs ${v.chebyshev.at(-1).toExponential(3)}`;
  });
}

await init();
$("status").textContent = "";
$("fov-run").onclick = runFov;
$("lr-run").onclick = runCurves;
$("mm-run").onclick = runMinimax;
runFov();
runCurves();
runMinimax();
