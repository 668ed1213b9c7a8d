import init, { runObstacle, runLanding, suboptimalityBound } from "./pkg/myopic_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

// World window of the planar example: x in [-10, 110], y in [-25, 45].
const X0 = -10, X1 = 110, Y0 = -25, Y1 = 45;

function toCanvas(canvas, x, y) {
  return [
    ((x - X0) / (X1 - X0)) * canvas.width,
    canvas.height - ((y - Y0) / (Y1 - Y0)) * canvas.height,
  ];
}

function drawPlane(sim) {
  const canvas = $("plane");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);

  const [cx, cy] = toCanvas(canvas, 50, 0);
  const r = (15 / (X1 - X0)) * canvas.width;
  ctx.fillStyle = "#e66";
  ctx.beginPath();
  ctx.arc(cx, cy, r, Math.PI, 0);
  ctx.closePath();
  ctx.fill();

  const [tx, ty] = toCanvas(canvas, 0, 0);
  ctx.strokeStyle = "#393";
  ctx.beginPath();
  ctx.arc(tx, ty, (5 / (X1 - X0)) * canvas.width, 0, 2 * Math.PI);
  ctx.stroke();

  const p = sim.path;
  ctx.strokeStyle = "#226";
  ctx.beginPath();
  for (let i = 0; i < p.length; i += 2) {
    const [x, y] = toCanvas(canvas, p[i], p[i + 1]);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  }
  ctx.stroke();
}

function fmt(v) {
  return Number.isNaN(v) ? "n/a" : v.toFixed(3);
}

function obstacle() {
  try {
    const sim = runObstacle($("mode").value, num("e"), num("ratio"));
    $("obstacle-result").textContent =
      `${sim.outcome}, target error ${fmt(sim.error)}, closest approach ${fmt(sim.minDistance)}`;
    drawPlane(sim);
  } catch (err) {
    $("obstacle-result").textContent = String(err);
  }
}

function landing() {
  $("landing-result").textContent = "running...";
  // Let the status repaint before the blocking run.
  setTimeout(() => {
    try {
      const sim = runLanding($("land-mode").value, num("land-e"), 2);
      $("landing-result").textContent =
        `${sim.outcome}, landing error ${fmt(sim.error)} m, closest approach to the boulder ${fmt(sim.minDistance)} m`;
    } catch (err) {
      $("landing-result").textContent = String(err);
    }
  }, 20);
}

function bound() {
  try {
    const v = suboptimalityBound(
      num("b-m"), num("b-eps"), num("b-delta"), num("b-obs"), num("b-l"), num("b-m0"), num("b-m1"),
    );
    $("bound").textContent = v.toPrecision(6);
  } catch (err) {
    $("bound").textContent = String(err);
  }
}

await init();
$("run").addEventListener("click", obstacle);
$("land").addEventListener("click", landing);
for (const id of ["b-m", "b-eps", "b-delta", "b-obs", "b-l", "b-m0", "b-m1"]) {
  $(id).addEventListener("input", bound);
}
obstacle();
bound();
