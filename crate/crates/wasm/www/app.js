// Expects the bindings in ./pkg, produced by
//   wasm-bindgen --target web --out-dir www/pkg target/wasm32-unknown-unknown/release/coalgame_wasm.wasm
import init, { analyze, formula, GameSession } from "./pkg/coalgame_wasm.js";

const $ = (id) => document.getElementById(id);
const csv = () => $("csv").value;
let game = null;
let states = [];

function fail(el, e) {
  el.textContent = String(e.message ?? e);
  el.className = "error";
}

function describe(rec) {
  const { phase, payload } = rec.move;
  const set = (p) => `{${p.join(",")}}`;
  const text = {
    step1: () => `plays p${payload.j} = ${set(payload.predicate)}`,
    step2: () => `answers ${set(payload.predicate)}`,
    step3: () => `picks ${payload.state} on side ${payload.ell}`,
    step4: () => `responds ${payload.state}`,
  }[phase]();
  return `<span class="${rec.player}">${rec.player}</span> ${text}`;
}

function log(html) {
  $("log").innerHTML += html + "\n";
}

function checkboxes() {
  return states.map((s) => `<label><input type="checkbox" value="${s}"> ${s}</label>`).join(" ");
}

function chosen() {
  return [...$("controls").querySelectorAll("input:checked")].map((i) => i.value);
}

function submit(move) {
  try {
    const r = JSON.parse(game.play(JSON.stringify(move)));
    log(describe({ player: r.state.humanRole, move }));
    r.engineMoves.forEach((m) => log(describe(m)));
    render(r.state, r.formula);
  } catch (e) {
    log(`<span class="error">illegal move: ${e.message ?? e}</span>`);
  }
}

function render(st, phi) {
  const turn = st.turn ? `<span class="${st.turn}">${st.turn}</span> to move` : "";
  const pending = ["p0", "p1"].map((k) => st.pendingPredicates[k] && `${k} = {${st.pendingPredicates[k].join(",")}}`);
  $("board").innerHTML =
    `position (${st.position.join(", ")}), round ${st.round}/${st.roundCap}, ${st.phase} ${turn}<br>` +
    pending.filter(Boolean).join(", ");
  const c = $("controls");
  c.innerHTML = "";
  if (st.winner) {
    c.innerHTML = `<b class="${st.winner}">${st.winner} wins</b> ${st.reason ?? ""}` + (phi ? `<pre>${phi}</pre>` : "");
    return;
  }
  if (st.turn !== st.humanRole) return;
  if (st.phase === "step1") {
    c.innerHTML = `side <select id="j"><option>0</option><option>1</option></select> ${checkboxes()} <button id="go">Challenge</button>`;
    $("go").onclick = () => submit({ phase: "step1", payload: { j: Number($("j").value), predicate: chosen() } });
  } else if (st.phase === "step2") {
    c.innerHTML = `${checkboxes()} <button id="go">Answer</button>`;
    $("go").onclick = () => submit({ phase: "step2", payload: { predicate: chosen() } });
  } else {
    st.legalHints.forEach(([ell, s]) => {
      const b = document.createElement("button");
      b.textContent = `${s} (side ${ell})`;
      b.onclick = () =>
        submit(st.phase === "step3" ? { phase: "step3", payload: { ell, state: s } } : { phase: "step4", payload: { state: s } });
      c.appendChild(b);
    });
  }
}

await init();

$("analyze").onclick = () => {
  try {
    const v = JSON.parse(analyze(csv()));
    const verdicts = v.verdicts
      .filter((d) => !d.bisimilar)
      .map((d) => `  ${d.x0} ${d.x1}: I=${d.index}, T=(${d.witness.state},{${d.witness.block.join(",")}})`);
    $("analysis").className = "";
    $("analysis").textContent =
      `blocks: ${v.blocks.map((b) => `{${b.join(",")}}`).join(" ")}\n` +
      `rounds: ${v.rounds.length}\nseparated pairs:\n${verdicts.join("\n")}`;
  } catch (e) {
    fail($("analysis"), e);
  }
};

$("formula").onclick = () => {
  try {
    $("formula-out").className = "";
    $("formula-out").textContent = formula(csv(), $("fx0").value, $("fx1").value, $("recode").value || undefined);
  } catch (e) {
    fail($("formula-out"), e);
  }
};

$("start").onclick = () => {
  $("log").innerHTML = "";
  try {
    states = JSON.parse(analyze(csv())).states;
    game = new GameSession(csv(), $("gx0").value, $("gx1").value, $("role").value);
    JSON.parse(game.openingMoves()).forEach((m) => log(describe(m)));
    render(JSON.parse(game.state()));
  } catch (e) {
    fail($("board"), e);
  }
};
