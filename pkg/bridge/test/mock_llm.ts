import http from "node:http";
import type { AddressInfo } from "node:net";

export interface MockLlm {
  url: string;
  port: number;
  requests: Array<{ path: string; body: any; auth: string | undefined }>;
  close(): Promise<void>;
}

/** Chat-completions stub. `failures` initial requests get HTTP 500, then
 * every request succeeds with `completion` (a fixed string or a function of
 * the parsed request body). */
export async function startMockLlm(
  completion: string | ((body: any) => string),
  failures = 0,
): Promise<MockLlm> {
  const requests: MockLlm["requests"] = [];
  let remainingFailures = failures;
  const server = http.createServer((req, res) => {
    const chunks: Buffer[] = [];
    req.on("data", (c) => chunks.push(c));
    req.on("end", () => {
      const body = JSON.parse(Buffer.concat(chunks).toString("utf8"));
      requests.push({
        path: req.url ?? "",
        body,
        auth: req.headers.authorization,
      });
      if (remainingFailures > 0) {
        remainingFailures--;
        res.writeHead(500, { "Content-Type": "application/json" });
        res.end(JSON.stringify({ error: "synthetic outage" }));
        return;
      }
      const content = typeof completion === "function" ? completion(body) : completion;
      res.writeHead(200, { "Content-Type": "application/json" });
      res.end(JSON.stringify({ choices: [{ message: { content } }] }));
    });
  });
  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const port = (server.address() as AddressInfo).port;
  return {
    url: `http://127.0.0.1:${port}/v1`,
    port,
    requests,
    close: () => new Promise((resolve) => server.close(() => resolve())),
  };
}
