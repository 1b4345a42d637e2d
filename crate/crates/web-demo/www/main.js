import init, { posterior_density, compare_methods, ripples_path } from "./pkg/argmax_prior_web.js";

const $ = (id) => document.getElementById(id);
const COLORS = ["#1f5fbf", "#c0392b", "#2e8b57"];

function frame(canvas, xr, yr, pad = 36) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => pad + (x - xr[0]) / (xr[1] - xr[0]) * (w - 2 * pad);
  const sy = (y) => h - pad - (y - yr[0]) / (yr[1] - yr[0]) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const x = xr[0] + (xr[1] - xr[0]) * i / 4, y = yr[0] + (yr[1] - yr[0]) * i / 4;
    ctx.fillText(+x.toPrecision(3), sx(x) - 8, h - pad + 14);
    ctx.fillText(+y.toPrecision(3), 2, sy(y) + 4);
  }
  return { ctx, sx, sy };
}

function line(f, xs, ys, color, width = 1.5) {
  f.ctx.strokeStyle = color;
  f.ctx.lineWidth = width;
  f.ctx.beginPath();
  xs.forEach((x, i) => (i ? f.ctx.lineTo : f.ctx.moveTo).call(f.ctx, f.sx(x), f.sy(ys[i])));
  f.ctx.stroke();
  f.ctx.lineWidth = 1;
}

function drawDensity() {
  const rho = 10 ** +$("d-rho").value, width = 10 ** +$("d-width").value, count = +$("d-count").value;
  $("d-rho-v").textContent = rho.toFixed(3);
  $("d-width-v").textContent = width.toFixed(3);
  $("d-count-v").textContent = count;
  const v = JSON.parse(posterior_density(rho, width, count, +$("d-seed").value, 800));
  const top = Math.max(...v.density) * 1.05;
  const f = frame($("density"), [-1, 3], [0, top]);
  // Objective and observations share a second axis on [-3, 3].
  const g = { ctx: f.ctx, sx: f.sx, sy: (y) => f.sy((y + 3) / 6 * top) };
  line(g, v.xs, v.objective, "#bbb", 1);
  f.ctx.fillStyle = "#333";
  v.obs_x.forEach((x, i) => { f.ctx.beginPath(); f.ctx.arc(g.sx(x), g.sy(v.obs_y[i]), 3, 0, 7); f.ctx.fill(); });
  line(f, v.xs, v.density, COLORS[0], 2);
  $("d-stats").textContent =
    `entropy ${v.entropy.toFixed(3)} nats, ${v.local_maxima} local maxima. ` +
    `Grey: noiseless objective with observations (right scale -3..3).`;
}

function drawCompare() {
  $("c-run").disabled = true;
  setTimeout(() => {
    try {
      const v = JSON.parse(compare_methods(+$("c-rho").value, +$("c-kv").value, +$("c-noise").value,
        +$("c-runs").value, +$("c-steps").value, 0));
      const n = v.curves[0].mean.length;
      const xs = Array.from({ length: n }, (_, i) => i + 1);
      const lo = Math.min(-0.5, ...v.curves.flatMap((c) => c.mean.map((m, i) => m - c.std[i])));
      const hi = Math.max(v.optimum + 0.2, ...v.curves.flatMap((c) => c.mean.map((m, i) => m + c.std[i])));
      const f = frame($("compare"), [1, n], [lo, hi]);
      line(f, [1, n], [v.optimum, v.optimum], "#aaa", 1);
      v.curves.forEach((c, k) => {
        f.ctx.fillStyle = COLORS[k] + "22";
        f.ctx.beginPath();
        xs.forEach((x, i) => f.ctx.lineTo(f.sx(x), f.sy(c.mean[i] + c.std[i])));
        for (let i = n - 1; i >= 0; i--) f.ctx.lineTo(f.sx(xs[i]), f.sy(c.mean[i] - c.std[i]));
        f.ctx.fill();
        line(f, xs, c.mean, COLORS[k], 2);
      });
      $("c-legend").innerHTML = v.curves.map((c, k) =>
        `<span style="color:${COLORS[k]}">&#9632; ${c.name} (${c.mean[n - 1].toFixed(3)})</span>`).join("") +
        `<span>grey: optimum ${v.optimum.toFixed(4)}; bands: &plusmn;1 sd over runs of the time-averaged observation</span>`;
    } finally {
      $("c-run").disabled = false;
    }
  }, 10);
}

function ripple(r) {
  return -r * r / 1000 + Math.cos(2 * Math.PI / 3 * r);
}

function drawRipples() {
  $("r-run").disabled = true;
  setTimeout(() => {
    try {
      const v = JSON.parse(ripples_path(+$("r-rho").value, +$("r-width").value, +$("r-steps").value, +$("r-seed").value));
      const c = $("ripples"), ctx = c.getContext("2d"), L = 30;
      const img = ctx.createImageData(c.width, c.height);
      for (let j = 0; j < c.height; j++) for (let i = 0; i < c.width; i++) {
        const x = (i / c.width * 2 - 1) * L, y = (1 - j / c.height * 2) * L;
        const s = Math.round(150 + 90 * ripple(Math.hypot(x, y)));
        const p = 4 * (j * c.width + i);
        img.data[p] = img.data[p + 1] = img.data[p + 2] = s;
        img.data[p + 3] = 255;
      }
      ctx.putImageData(img, 0, 0);
      const px = (x) => (x / L + 1) / 2 * c.width, py = (y) => (1 - y / L) / 2 * c.height;
      const n = v.xs.length;
      v.xs.forEach((x, i) => {
        const t = i / Math.max(1, n - 1);
        ctx.fillStyle = `rgb(${Math.round(40 + 200 * t)},60,${Math.round(220 - 180 * t)})`;
        ctx.fillRect(px(x) - 2, py(v.ys[i]) - 2, 4, 4);
      });
      const steps = Array.from({ length: n }, (_, i) => i + 1);
      const f = frame($("ripples-value"), [1, n], [Math.min(...v.values), 1]);
      line(f, steps, v.values, "#bbb", 1);
      line(f, steps, v.time_avg, COLORS[0], 2);
    } finally {
      $("r-run").disabled = false;
    }
  }, 10);
}

await init();
for (const id of ["d-rho", "d-width", "d-count", "d-seed"]) $(id).addEventListener("input", drawDensity);
$("c-run").addEventListener("click", drawCompare);
$("r-run").addEventListener("click", drawRipples);
drawDensity();
drawCompare();
drawRipples();
