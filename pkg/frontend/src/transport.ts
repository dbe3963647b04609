import { ClientMessage, ServerMessage, decode, encode } from "./protocol";

/** Anything that can carry wire messages. Tests substitute a scripted one. */
export interface Transport {
  send(msg: ClientMessage): void;
  onMessage(handler: (msg: ServerMessage) => void): void;
}

export class WsTransport implements Transport {
  private readonly ws: WebSocket;
  private handler: (msg: ServerMessage) => void = () => undefined;

  constructor(url: string) {
    this.ws = new WebSocket(url);
    this.ws.addEventListener("message", (ev) => {
      this.handler(decode(String(ev.data)));
    });
  }

  send(msg: ClientMessage): void {
    const text = encode(msg);
    if (this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(text);
    } else {
      // queue sends issued before the socket finishes connecting
      this.ws.addEventListener("open", () => this.ws.send(text), {
        once: true,
      });
    }
  }

  onMessage(handler: (msg: ServerMessage) => void): void {
    this.handler = handler;
  }
}
