import init, { kernel_curve, collision_curve, smoother_map } from "./pkg/mhk_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const PAD = 40;

function axes(ctx, w, h, xmax, ymin, ymax, ylabel) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(PAD, 10, w - PAD - 10, h - PAD - 10);
  ctx.fillStyle = "#444";
  ctx.font = "12px sans-serif";
  ctx.fillText("0", PAD - 4, h - PAD + 16);
  ctx.fillText(xmax, w - 24, h - PAD + 16);
  ctx.fillText("angle", w / 2, h - 8);
  ctx.fillText(ymax.toPrecision(3), 2, 18);
  ctx.fillText(ymin.toPrecision(3), 2, h - PAD);
  ctx.fillText(ylabel, 2, h / 2);
}

function scaler(w, h, xmax, ymin, ymax) {
  return (x, y) => [
    PAD + (x / xmax) * (w - PAD - 10),
    10 + (1 - (y - ymin) / (ymax - ymin)) * (h - PAD - 10),
  ];
}

function line(ctx, pt, xs, ys, color) {
  ctx.strokeStyle = color;
  ctx.beginPath();
  let started = false;
  xs.forEach((x, i) => {
    if (!Number.isFinite(ys[i])) return;
    const [px, py] = pt(x, ys[i]);
    if (started) ctx.lineTo(px, py); else ctx.moveTo(px, py);
    started = true;
  });
  ctx.stroke();
}

function guarded(errId, f) {
  $(errId).textContent = "";
  try { f(); } catch (e) { $(errId).textContent = String(e.message ?? e); }
}

function drawKernel() {
  guarded("k-err", () => {
    const c = kernel_curve(num("k-q"), num("k-ratio"), 0.1 * Math.PI, 40, num("k-n"), num("k-seed"));
    const canvas = $("k-canvas");
    const ctx = canvas.getContext("2d");
    const xs = c.angles, closed = c.closed, series = c.series, mc = c.mc_mean, se = c.mc_stderr;
    const finite = [...closed, ...mc.map((m, i) => m + 2 * se[i])].filter(Number.isFinite);
    const ymax = Math.max(...finite);
    axes(ctx, canvas.width, canvas.height, "π", 0, ymax, "K");
    const pt = scaler(canvas.width, canvas.height, Math.PI, 0, ymax);
    line(ctx, pt, xs, closed, "#1f77b4");
    line(ctx, pt, xs, series, "#2ca02c");
    ctx.strokeStyle = "#d62728";
    ctx.fillStyle = "#d62728";
    xs.forEach((x, i) => {
      if (!Number.isFinite(mc[i])) return;
      const [px, lo] = pt(x, mc[i] - 2 * se[i]);
      const [, hi] = pt(x, mc[i] + 2 * se[i]);
      const [, py] = pt(x, mc[i]);
      ctx.beginPath(); ctx.moveTo(px, lo); ctx.lineTo(px, hi); ctx.stroke();
      ctx.fillRect(px - 2, py - 2, 4, 4);
    });
  });
}

function drawCollision() {
  guarded("c-err", () => {
    const c = collision_curve(num("c-h"), 37, num("c-n"), num("c-seed"));
    const canvas = $("c-canvas");
    const ctx = canvas.getContext("2d");
    axes(ctx, canvas.width, canvas.height, "π", 0, 1, "P");
    const pt = scaler(canvas.width, canvas.height, Math.PI, 0, 1);
    line(ctx, pt, c.angles, c.theoretical, "#1f77b4");
    ctx.fillStyle = "#d62728";
    c.angles.forEach((x, i) => {
      const [px, py] = pt(x, c.empirical[i]);
      ctx.fillRect(px - 2, py - 2, 4, 4);
    });
  });
}

function color(v) {
  // -1 red, 0 white, +1 blue
  const t = Math.max(-1, Math.min(1, v));
  const a = Math.round(255 * (1 - Math.abs(t)));
  return t >= 0 ? [a, a, 255] : [255, a, a];
}

function drawMap() {
  guarded("m-err", () => {
    const canvas = $("m-canvas");
    const ctx = canvas.getContext("2d");
    const w = 180, h = 90;
    const m = smoother_map(num("m-n"), num("m-q"), $("m-labels").value, w, h, num("m-seed"));
    const img = ctx.createImageData(w, h);
    m.values.forEach((v, i) => {
      const [r, g, b] = color(v);
      img.data.set([r, g, b, 255], 4 * i);
    });
    const off = new OffscreenCanvas(w, h);
    off.getContext("2d").putImageData(img, 0, 0);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
    const lon = m.train_lon, lat = m.train_lat, ys = m.train_labels;
    lon.forEach((l, i) => {
      const px = ((l + Math.PI) / (2 * Math.PI)) * canvas.width;
      const py = ((Math.PI / 2 - lat[i]) / Math.PI) * canvas.height;
      ctx.fillStyle = ys[i] > 0 ? "#08306b" : "#67000d";
      ctx.beginPath(); ctx.arc(px, py, 2.5, 0, 2 * Math.PI); ctx.fill();
    });
  });
}

await init();
$("k-run").onclick = drawKernel;
$("c-run").onclick = drawCollision;
$("m-run").onclick = drawMap;
drawKernel();
drawCollision();
drawMap();
