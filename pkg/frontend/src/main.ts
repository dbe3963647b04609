import { App } from "./app";
import { Mode } from "./protocol";
import { WsTransport } from "./transport";

async function boot(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const server = params.get("server") ?? "127.0.0.1:8765";
  const program = params.get("program") ?? "variation1";
  const mode: Mode = params.get("mode") === "wimp" ? "wimp" : "sketch";

  const res = await fetch(`http://${server}/programs/${program}`);
  if (!res.ok) {
    throw new Error(`program ${program}: ${res.status} ${await res.text()}`);
  }
  const { source } = (await res.json()) as { source: string };

  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const app = new App(root, new WsTransport(`ws://${server}/ws`));
  app.load(source, mode);
}

boot().catch((err) => {
  const pre = document.createElement("pre");
  pre.className = "boot-error";
  pre.textContent = String(err);
  document.body.appendChild(pre);
});
