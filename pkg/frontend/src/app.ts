import {
  GutterGeometry,
  Mode,
  ServerMessage,
  StateUpdateMsg,
} from "./protocol";
import { Transport } from "./transport";
import { InkLayer } from "./ink";
import { ToastTray } from "./toast";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface AppOptions {
  lineHeight?: number;
  topOffset?: number;
  gutterWidth?: number;
  now?: () => number;
}

interface WimpButton {
  cmd: string;
  label: string;
}

const WIMP_BUTTONS: WimpButton[] = [
  { cmd: "start", label: "Start (F5)" },
  { cmd: "continue", label: "Continue (F8)" },
  { cmd: "stepOver", label: "Step Over (F10)" },
  { cmd: "stepInto", label: "Step Into (F11)" },
  { cmd: "stepOut", label: "Step Out (Shift+F11)" },
  { cmd: "stop", label: "Stop (Shift+F5)" },
];

function keyCommand(e: KeyboardEvent): string | null {
  switch (e.key) {
    case "F5":
      return e.shiftKey ? "stop" : "start";
    case "F8":
      return "continue";
    case "F10":
      return "stepOver";
    case "F11":
      return e.shiftKey ? "stepOut" : "stepInto";
    default:
      return null;
  }
}

/**
 * The whole client: code pane with a breakpoint gutter, an ink overlay
 * for pen gestures, a toolbar/keyboard mode, console and variables
 * panes, and toasts for server warnings. All state shown is server
 * state — the client never guesses.
 */
export class App {
  mode: Mode = "sketch";
  geometry: GutterGeometry;

  private readonly doc: Document;
  private readonly lineHeight: number;
  private readonly topOffset: number;
  private readonly gutterWidth: number;

  private readonly ink: InkLayer;
  private readonly toasts: ToastTray;
  private readonly editor: HTMLElement;
  private readonly gutterSvg: SVGElement;
  private readonly codeEl: HTMLElement;
  private readonly consoleEl: HTMLElement;
  private readonly varsEl: HTMLElement;
  private readonly phaseEl: HTMLElement;
  private readonly statusEl: HTMLElement;
  private readonly wimpBar: HTMLElement;
  private currentLineEl: HTMLElement | null = null;
  private readonly keydownHandler: (e: KeyboardEvent) => void;

  constructor(
    private readonly root: HTMLElement,
    private readonly transport: Transport,
    opts: AppOptions = {},
  ) {
    this.doc = root.ownerDocument;
    this.lineHeight = opts.lineHeight ?? 18;
    this.topOffset = opts.topOffset ?? 4;
    this.gutterWidth = opts.gutterWidth ?? 40;
    const now = opts.now ?? (() => performance.now());
    this.geometry = this.makeGeometry(0);

    root.classList.add("sketchdbg");

    const toolbar = this.doc.createElement("div");
    toolbar.className = "toolbar";
    const modeBtn = this.doc.createElement("button");
    modeBtn.className = "mode-toggle";
    modeBtn.textContent = "mode";
    modeBtn.addEventListener("click", () => {
      this.setMode(this.mode === "sketch" ? "wimp" : "sketch");
    });
    toolbar.appendChild(modeBtn);

    this.wimpBar = this.doc.createElement("span");
    this.wimpBar.className = "wimp-buttons";
    for (const { cmd, label } of WIMP_BUTTONS) {
      const b = this.doc.createElement("button");
      b.textContent = label;
      b.dataset.cmd = cmd;
      b.addEventListener("click", () => {
        this.transport.send({ type: "wimp", name: cmd, inputKind: "click" });
      });
      this.wimpBar.appendChild(b);
    }
    toolbar.appendChild(this.wimpBar);

    this.phaseEl = this.doc.createElement("span");
    this.phaseEl.className = "phase";
    toolbar.appendChild(this.phaseEl);
    this.statusEl = this.doc.createElement("span");
    this.statusEl.className = "status";
    toolbar.appendChild(this.statusEl);
    root.appendChild(toolbar);

    this.editor = this.doc.createElement("div");
    this.editor.className = "editor stroke-surface";
    this.gutterSvg = this.doc.createElementNS(SVG_NS, "svg");
    this.gutterSvg.setAttribute("class", "gutter");
    this.editor.appendChild(this.gutterSvg);
    this.codeEl = this.doc.createElement("div");
    this.codeEl.className = "code";
    this.editor.appendChild(this.codeEl);
    this.ink = new InkLayer(this.doc, transport, now);
    this.editor.appendChild(this.ink.svg);
    root.appendChild(this.editor);

    this.consoleEl = this.doc.createElement("pre");
    this.consoleEl.className = "console";
    root.appendChild(this.consoleEl);
    this.varsEl = this.doc.createElement("pre");
    this.varsEl.className = "variables";
    root.appendChild(this.varsEl);

    this.toasts = new ToastTray(this.doc);
    this.doc.body.appendChild(this.toasts.el);

    this.bindPointer();
    this.keydownHandler = (e) => this.keydown(e);
    this.doc.addEventListener("keydown", this.keydownHandler);
    transport.onMessage((m) => this.receive(m));
    this.applyMode();
  }

  /** Detach document-level listeners and the toast tray. */
  dispose(): void {
    this.doc.removeEventListener("keydown", this.keydownHandler);
    this.toasts.el.remove();
  }

  load(source: string, mode: Mode): void {
    this.mode = mode;
    const lines = source.replace(/\n$/, "").split("\n");
    this.geometry = this.makeGeometry(lines.length);
    this.renderCode(lines);
    this.transport.send({
      type: "load",
      source,
      mode,
      gutterGeometry: this.geometry,
    });
    this.applyMode();
  }

  setMode(mode: Mode): void {
    if (mode === this.mode) return;
    this.mode = mode;
    this.transport.send({ type: "setMode", mode });
    this.applyMode();
  }

  // --- incoming ---------------------------------------------------------

  private receive(msg: ServerMessage): void {
    switch (msg.type) {
      case "stateUpdate":
        this.applyState(msg);
        break;
      case "inkFeedback":
        this.ink.feedback(msg.strokeId, msg.accepted);
        break;
      case "spiralTick":
        this.statusEl.textContent = `spiral step ×${msg.stepsTotal}`;
        break;
      case "warning":
        this.toasts.show(msg.text, "warning");
        break;
      case "error":
        this.toasts.show(msg.text, "error");
        break;
    }
  }

  private applyState(su: StateUpdateMsg): void {
    this.root.dataset.phase = su.phase;
    this.phaseEl.textContent = su.phase;

    this.currentLineEl?.classList.remove("current");
    this.currentLineEl = null;
    if (su.currentLine !== undefined) {
      const el = this.codeEl.querySelector<HTMLElement>(
        `[data-line="${su.currentLine}"]`,
      );
      if (el) {
        el.classList.add("current");
        this.currentLineEl = el;
      }
    }

    // the gutter mirrors the server's breakpoint set, nothing more
    while (this.gutterSvg.firstChild) {
      this.gutterSvg.firstChild.remove();
    }
    for (const line of su.breakpoints) {
      const dot = this.doc.createElementNS(SVG_NS, "circle");
      dot.setAttribute("class", "bp-dot");
      dot.setAttribute("data-line", String(line));
      dot.setAttribute("cx", String(this.gutterWidth / 2));
      dot.setAttribute("cy", String(this.lineCenterY(line)));
      dot.setAttribute("r", "4");
      this.gutterSvg.appendChild(dot);
    }

    this.consoleEl.textContent = su.console;
    this.varsEl.textContent = Object.entries(su.variables)
      .map(([k, v]) => `${k} = ${v}`)
      .join("\n");
  }

  // --- input ------------------------------------------------------------

  private bindPointer(): void {
    const local = (e: MouseEvent): [number, number] => {
      const rect = this.editor.getBoundingClientRect();
      return [e.clientX - rect.left, e.clientY - rect.top];
    };
    this.editor.addEventListener("pointerdown", (e) => {
      if (this.mode !== "sketch") return;
      (this.editor as Element & { setPointerCapture?: (id: number) => void })
        .setPointerCapture?.((e as PointerEvent).pointerId ?? 1);
      this.ink.penDown(...local(e));
    });
    this.editor.addEventListener("pointermove", (e) => {
      if (this.mode !== "sketch" || !this.ink.drawing) return;
      this.ink.penMove(...local(e));
    });
    this.editor.addEventListener("pointerup", (e) => {
      if (this.mode !== "sketch" || !this.ink.drawing) return;
      this.ink.penUp(...local(e));
    });

    // toolbar mode: a plain click in the gutter toggles a breakpoint
    this.gutterSvg.addEventListener("click", (e) => {
      if (this.mode !== "wimp") return;
      const rect = this.editor.getBoundingClientRect();
      const line = this.lineAtY(e.clientY - rect.top);
      if (line === null) return;
      this.transport.send({
        type: "wimp",
        name: "toggleBreakpoint",
        inputKind: "click",
        line,
      });
    });
  }

  private keydown(e: KeyboardEvent): void {
    if (this.mode !== "wimp") return;
    const cmd = keyCommand(e);
    if (!cmd) return;
    e.preventDefault();
    this.transport.send({ type: "wimp", name: cmd, inputKind: "keypress" });
  }

  // --- rendering --------------------------------------------------------

  private renderCode(lines: string[]): void {
    while (this.codeEl.firstChild) {
      this.codeEl.firstChild.remove();
    }
    lines.forEach((text, i) => {
      const div = this.doc.createElement("div");
      div.className = "code-line";
      div.dataset.line = String(i + 1);
      div.style.height = `${this.lineHeight}px`;
      div.textContent = text === "" ? " " : text;
      this.codeEl.appendChild(div);
    });
    this.codeEl.style.paddingTop = `${this.topOffset}px`;
    this.codeEl.style.marginLeft = `${this.gutterWidth}px`;
    const height = this.topOffset + lines.length * this.lineHeight;
    this.gutterSvg.setAttribute("width", String(this.gutterWidth));
    this.gutterSvg.setAttribute("height", String(height));
  }

  private applyMode(): void {
    this.root.dataset.mode = this.mode;
    this.wimpBar.hidden = this.mode !== "wimp";
  }

  private makeGeometry(lineCount: number): GutterGeometry {
    return {
      xMin: 0,
      xMax: this.gutterWidth,
      lineHeight: this.lineHeight,
      topOffset: this.topOffset,
      firstLine: 1,
      lineCount,
    };
  }

  private lineCenterY(line: number): number {
    return (
      this.topOffset +
      (line - this.geometry.firstLine) * this.lineHeight +
      this.lineHeight / 2
    );
  }

  private lineAtY(y: number): number | null {
    const row = Math.floor((y - this.topOffset) / this.lineHeight);
    const line = this.geometry.firstLine + row;
    if (row < 0 || line >= this.geometry.firstLine + this.geometry.lineCount) {
      return null;
    }
    return line;
  }
}
