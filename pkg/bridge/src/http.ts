import http from "node:http";

import { handleTurn, TurnRecordLog } from "./bridge.js";
import { TurnMessageSchema, type AgentConfig } from "./types.js";

/** HTTP transport: the harness POSTs the identical turn message schema and
 * reads the identical {"raw_text": ...} response body. */
export function makeHttpServer(config: AgentConfig): http.Server {
  const log = new TurnRecordLog(config.logPath);
  return http.createServer((req, res) => {
    if (req.method !== "POST") {
      res.writeHead(405, { "Content-Type": "application/json" });
      res.end(JSON.stringify({ error: "POST a turn message" }));
      return;
    }
    const chunks: Buffer[] = [];
    req.on("data", (chunk) => chunks.push(chunk));
    req.on("end", () => {
      void (async () => {
        try {
          const message = TurnMessageSchema.parse(
            JSON.parse(Buffer.concat(chunks).toString("utf8")),
          );
          const response = await handleTurn(config, message, log);
          res.writeHead(200, { "Content-Type": "application/json" });
          res.end(JSON.stringify(response));
        } catch (error) {
          res.writeHead(400, { "Content-Type": "application/json" });
          res.end(JSON.stringify({ error: String(error) }));
        }
      })();
    });
  });
}

export function runHttp(config: AgentConfig): Promise<void> {
  return new Promise((resolve, reject) => {
    const server = makeHttpServer(config);
    server.on("error", reject);
    server.listen(config.port, "127.0.0.1", () => {
      const address = server.address();
      const port = typeof address === "object" && address ? address.port : config.port;
      process.stderr.write(`bridge: listening on http://127.0.0.1:${port}\n`);
    });
    process.on("SIGINT", () => server.close(() => resolve()));
    process.on("SIGTERM", () => server.close(() => resolve()));
  });
}
