/**
 * Wire contract with the debugger service. This module mirrors the JSON
 * messages the server speaks; nothing else in the frontend knows about
 * the backend.
 */

export type Mode = "sketch" | "wimp";

export interface GutterGeometry {
  xMin: number;
  xMax: number;
  lineHeight: number;
  topOffset: number;
  firstLine: number;
  lineCount: number;
}

/** [x, y, t] with t in milliseconds on the client's clock. */
export type WirePoint = [number, number, number];

export interface LoadMsg {
  type: "load";
  source: string;
  mode: Mode;
  gutterGeometry: GutterGeometry;
}

export interface StrokeBeginMsg {
  type: "strokeBegin";
  strokeId: number;
}

export interface StrokePointsMsg {
  type: "strokePoints";
  strokeId: number;
  points: WirePoint[];
}

export interface StrokeEndMsg {
  type: "strokeEnd";
  strokeId: number;
}

export interface WimpMsg {
  type: "wimp";
  name: string;
  inputKind: "click" | "keypress";
  line?: number;
}

export interface SetModeMsg {
  type: "setMode";
  mode: Mode;
}

export type ClientMessage =
  | LoadMsg
  | StrokeBeginMsg
  | StrokePointsMsg
  | StrokeEndMsg
  | WimpMsg
  | SetModeMsg;

export interface StackFrame {
  function: string;
  line: number;
  depth: number;
}

export interface StateUpdateMsg {
  type: "stateUpdate";
  phase: "idle" | "paused" | "terminated";
  currentLine?: number;
  variables: Record<string, unknown>;
  callStack: StackFrame[];
  breakpoints: number[];
  console: string;
}

export interface InkFeedbackMsg {
  type: "inkFeedback";
  strokeId: number;
  accepted: boolean;
  kind?: string;
}

export interface SpiralTickMsg {
  type: "spiralTick";
  strokeId: number;
  stepsTotal: number;
}

export interface WarningMsg {
  type: "warning";
  text: string;
}

export interface ErrorMsg {
  type: "error";
  text: string;
}

export type ServerMessage =
  | StateUpdateMsg
  | InkFeedbackMsg
  | SpiralTickMsg
  | WarningMsg
  | ErrorMsg;

const SERVER_TYPES = new Set([
  "stateUpdate",
  "inkFeedback",
  "spiralTick",
  "warning",
  "error",
]);

export function encode(msg: ClientMessage): string {
  return JSON.stringify(msg);
}

export function decode(text: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new Error(`server sent unparsable JSON: ${text.slice(0, 80)}`);
  }
  if (
    typeof obj !== "object" ||
    obj === null ||
    typeof (obj as { type?: unknown }).type !== "string"
  ) {
    throw new Error(`malformed server message: ${text.slice(0, 80)}`);
  }
  const type = (obj as { type: string }).type;
  if (!SERVER_TYPES.has(type)) {
    throw new Error(`unknown server message type: ${type}`);
  }
  return obj as ServerMessage;
}
