import { Transport } from "./transport";
import { WirePoint } from "./protocol";

const SVG_NS = "http://www.w3.org/2000/svg";

export const BATCH_MS = 16; // strokePoints flush cadence while the pen moves
export const CLEAR_MS = 500; // resolved ink lingers briefly, then clears

const WET_COLOR = "#8a8a8a"; // grey while the stroke is undecided
const ACCEPT_COLOR = "#000000";
const REJECT_COLOR = "#c0392b";

interface LiveStroke {
  id: number;
  el: SVGElement;
  points: WirePoint[]; // everything drawn so far, for the polyline
  pending: WirePoint[]; // not yet sent to the server
}

/**
 * Captures pen input into batched stroke messages and renders the ink:
 * grey while drawing, black (or red) once the server answers, gone half
 * a second later.
 */
export class InkLayer {
  readonly svg: SVGElement;
  private live: LiveStroke | null = null;
  private resolved = new Map<number, SVGElement>();
  private nextId = 1;
  private flushTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    doc: Document,
    private readonly transport: Transport,
    private readonly now: () => number,
  ) {
    this.svg = doc.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "ink");
  }

  get drawing(): boolean {
    return this.live !== null;
  }

  penDown(x: number, y: number): void {
    if (this.live) this.penUp(x, y); // lost pointerup; close the old stroke
    const el = this.svg.ownerDocument.createElementNS(SVG_NS, "polyline");
    el.setAttribute("fill", "none");
    el.setAttribute("stroke", WET_COLOR);
    el.setAttribute("stroke-width", "2");
    const id = this.nextId++;
    el.setAttribute("data-stroke-id", String(id));
    this.svg.appendChild(el);
    this.live = { id, el, points: [], pending: [] };
    this.transport.send({ type: "strokeBegin", strokeId: id });
    this.addPoint(x, y);
  }

  penMove(x: number, y: number): void {
    if (!this.live) return;
    this.addPoint(x, y);
    if (this.flushTimer === null) {
      this.flushTimer = setTimeout(() => this.flush(), BATCH_MS);
    }
  }

  penUp(x: number, y: number): void {
    const live = this.live;
    if (!live) return;
    this.addPoint(x, y);
    this.flush();
    // park it before sending: the reply may arrive synchronously
    this.resolved.set(live.id, live.el);
    this.live = null;
    this.transport.send({ type: "strokeEnd", strokeId: live.id });
  }

  /** Server verdict for a finished stroke: recolor, then clear. */
  feedback(strokeId: number, accepted: boolean): void {
    const el = this.resolved.get(strokeId);
    if (!el) return;
    el.setAttribute("stroke", accepted ? ACCEPT_COLOR : REJECT_COLOR);
    el.setAttribute("data-accepted", String(accepted));
    setTimeout(() => {
      el.remove();
      this.resolved.delete(strokeId);
    }, CLEAR_MS);
  }

  private addPoint(x: number, y: number): void {
    const live = this.live;
    if (!live) return;
    const p: WirePoint = [x, y, this.now()];
    live.points.push(p);
    live.pending.push(p);
    live.el.setAttribute(
      "points",
      live.points.map(([px, py]) => `${px},${py}`).join(" "),
    );
  }

  private flush(): void {
    if (this.flushTimer !== null) {
      clearTimeout(this.flushTimer);
      this.flushTimer = null;
    }
    const live = this.live;
    if (!live || live.pending.length === 0) return;
    this.transport.send({
      type: "strokePoints",
      strokeId: live.id,
      points: live.pending,
    });
    live.pending = [];
  }
}
