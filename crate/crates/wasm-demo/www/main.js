import init, { stability_traces, fixed_point, lambda_sweep } from "./pkg/aisgd_wasm.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const $ = (id) => document.getElementById(id);

// series: [{label, ys}], xs shared; non-finite ys are skipped and marked
function plot(canvas, xs, series, { logx = false, logy = false, marks = [] } = {}) {
  const ctx = canvas.getContext("2d");
  const W = canvas.width, H = canvas.height, pad = 48;
  ctx.clearRect(0, 0, W, H);
  const tx = (v) => (logx ? Math.log10(v) : v);
  const ty = (v) => (logy ? Math.log10(v) : v);
  const ok = (v) => Number.isFinite(v) && (!logy || v > 0);

  let ys = series.flatMap((s) => s.ys.filter(ok).map(ty));
  ys = ys.concat(marks.map((m) => m.y).filter(Number.isFinite).map(ty));
  if (ys.length === 0) return;
  const x0 = tx(Math.min(...xs)), x1 = tx(Math.max(...xs));
  let y0 = Math.min(...ys), y1 = Math.max(...ys);
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const px = (v) => pad + ((tx(v) - x0) / (x1 - x0 || 1)) * (W - 2 * pad);
  const py = (v) => H - pad - ((ty(v) - y0) / (y1 - y0)) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  const fmt = (v, log) => (log ? "1e" + v.toFixed(1) : v.toPrecision(3));
  ctx.fillText(fmt(y1, logy), 2, pad + 4);
  ctx.fillText(fmt(y0, logy), 2, H - pad);
  ctx.fillText(fmt(x0, logx), pad, H - pad + 16);
  ctx.fillText(fmt(x1, logx), W - pad - 30, H - pad + 16);

  series.forEach((s, k) => {
    ctx.strokeStyle = COLORS[k % COLORS.length];
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    let pen = false;
    s.ys.forEach((v, i) => {
      if (!ok(v)) { pen = false; return; }
      const X = px(xs[i]), Y = py(v);
      pen ? ctx.lineTo(X, Y) : ctx.moveTo(X, Y);
      pen = true;
    });
    ctx.stroke();
    const bad = s.ys.findIndex((v) => !Number.isFinite(v));
    if (bad >= 0) {
      ctx.fillText("✕ diverged", px(xs[bad]) + 3, pad + 14 + 12 * k);
    }
    ctx.fillStyle = COLORS[k % COLORS.length];
    ctx.fillText(s.label, W - pad - 60, pad + 14 + 14 * k);
    ctx.fillStyle = "#555";
  });

  for (const m of marks) {
    ctx.fillStyle = "#000";
    ctx.beginPath();
    ctx.arc(px(m.x), py(m.y), 4, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function curves(c) {
  const out = [];
  for (let i = 0; i < c.count(); i++) out.push({ label: c.label(i), ys: Array.from(c.series(i)) });
  return out;
}

function runStability() {
  const scale = +$("st-scale").value;
  try {
    const c = stability_traces(scale, +$("st-n").value, +$("st-seed").value);
    const xs = Array.from(c.xs());
    const s = curves(c);
    plot($("st-canvas"), xs, s, { logx: true, logy: true });
    $("st-out").textContent = s
      .map((v) => `${v.label.padEnd(6)} final excess risk ${v.ys.at(-1).toExponential(3)}`)
      .join("\n");
    c.free();
  } catch (e) {
    $("st-out").textContent = String(e);
  }
}

function runFixedPoint() {
  const gamma = Math.pow(10, +$("fp-gamma").value);
  $("fp-gamma-v").textContent = gamma.toPrecision(3);
  try {
    const v = fixed_point($("fp-family").value, +$("fp-u0").value, +$("fp-c").value, +$("fp-y").value, gamma);
    const us = Array.from(v.us());
    plot($("fp-canvas"), us, [
      { label: "γ·g(u0+u‖x‖²)", ys: Array.from(v.hs()) },
      { label: "u", ys: us },
    ], { marks: [{ x: v.u_star, y: v.u_star }] });
    $("fp-out").textContent =
      `u* = ${v.u_star.toPrecision(8)}   bound = ${v.bound.toPrecision(6)}   ` +
      `s_n = ${v.s_n.toPrecision(6)}   bisection steps = ${v.iterations}`;
    v.free();
  } catch (e) {
    $("fp-out").textContent = String(e);
  }
}

function runSweep() {
  $("sw-out").textContent = "running…";
  setTimeout(() => {
    try {
      const c = lambda_sweep(+$("sw-eta").value, +$("sw-n").value, +$("sw-seed").value);
      const xs = Array.from(c.xs());
      const s = curves(c);
      plot($("sw-canvas"), xs, s);
      $("sw-out").textContent = s
        .map((v) => {
          const spread = Math.max(...v.ys) - Math.min(...v.ys);
          return `${v.label.padEnd(6)} test error ${v.ys.map((e) => e.toFixed(4)).join(" ")}  spread ${spread.toFixed(4)}`;
        })
        .join("\n") + "\n(x axis: log10 λ)";
      c.free();
    } catch (e) {
      $("sw-out").textContent = String(e);
    }
  }, 0);
}

await init();
$("st-scale").addEventListener("input", () => ($("st-scale-v").textContent = $("st-scale").value));
$("st-run").addEventListener("click", runStability);
for (const id of ["fp-family", "fp-u0", "fp-c", "fp-y", "fp-gamma"]) $(id).addEventListener("input", runFixedPoint);
$("sw-run").addEventListener("click", runSweep);
runStability();
runFixedPoint();
