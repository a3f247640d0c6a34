import init, { graded_nodes, scatter, interior_error } from "./pkg/cfier_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function drawNodes() {
  const xy = graded_nodes($("n-geo").value, num("n-p"), num("n-n"));
  const c = $("n-canvas"), ctx = c.getContext("2d");
  ctx.clearRect(0, 0, c.width, c.height);
  const s = c.width / 5.0;
  ctx.fillStyle = "#c33";
  for (let i = 0; i < xy.length; i += 2) {
    ctx.beginPath();
    ctx.arc(c.width / 2 + s * xy[i], c.height / 2 - s * xy[i + 1], 2, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function plot(canvas, ys, color) {
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const max = Math.max(...ys);
  ctx.strokeStyle = color;
  ctx.beginPath();
  ys.forEach((y, i) => {
    const px = (i / (ys.length - 1)) * canvas.width;
    const py = canvas.height - 5 - (y / max) * (canvas.height - 10);
    i === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  });
  ctx.stroke();
}

function solveScattering() {
  const t0 = performance.now();
  const r = scatter($("s-geo").value, num("s-k"), num("s-n"), (num("s-theta") * Math.PI) / 180, 1e-8);
  const ms = performance.now() - t0;
  const h = r.history;
  $("s-out").textContent =
    `${r.converged ? "converged" : "stopped at maxit"} after ${r.iterations} iterations, ` +
    `final residual ${h[h.length - 1].toExponential(2)}, ${ms.toFixed(0)} ms\n|u_inf(theta)| for theta in [0, 2 pi):`;
  plot($("s-canvas"), Array.from(r.far_field), "#236");
}

function convergence() {
  const lines = ["    2n  iters  error"];
  for (let n = 32; n <= 512; n *= 2) {
    const [it, err] = interior_error($("i-geo").value, num("i-k"), n);
    lines.push(`${String(n).padStart(6)}  ${String(it).padStart(5)}  ${err.toExponential(2)}`);
  }
  $("i-out").textContent = lines.join("\n");
}

function guarded(f, out) {
  return () => {
    try {
      f();
    } catch (e) {
      if (out) $(out).textContent = `error: ${e.message ?? e}`;
      else alert(e.message ?? e);
    }
  };
}

await init();
$("n-go").onclick = guarded(drawNodes);
$("s-go").onclick = guarded(solveScattering, "s-out");
$("i-go").onclick = guarded(convergence, "i-out");
drawNodes();
