import { pathToFileURL } from "node:url";

import { runHttp } from "./http.js";
import { runStdio } from "./stdio.js";
import { DEFAULT_CONFIG, type AgentConfig } from "./types.js";

const USAGE = `usage: node dist/main.js --endpoint URL --model NAME [options]

options:
  --endpoint URL       chat-completions base URL (e.g. https://host/v1)
  --model NAME         model name sent to the endpoint
  --auth-env NAME      env var holding the bearer token (default BRIDGE_API_KEY)
  --temperature X      sampling temperature (default 0.7)
  --retries N          retries after a failed call (default 2)
  --backoff-ms N       base backoff delay in ms (default 250)
  --transport MODE     stdio (default) or http
  --port N             port for --transport http (default 8765)
  --log PATH           TurnRecord JSONL file (default turn_records.jsonl,
                       empty string disables)
`;

export function parseArgs(argv: string[]): AgentConfig {
  const config = { ...DEFAULT_CONFIG };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      const value = argv[++i];
      if (value === undefined) throw new Error(`missing value for ${flag}`);
      return value;
    };
    switch (flag) {
      case "--endpoint":
        config.endpoint = next();
        break;
      case "--model":
        config.model = next();
        break;
      case "--auth-env":
        config.authEnv = next();
        break;
      case "--temperature":
        config.temperature = Number(next());
        break;
      case "--retries":
        config.maxRetries = Number(next());
        break;
      case "--backoff-ms":
        config.backoffMs = Number(next());
        break;
      case "--transport": {
        const mode = next();
        if (mode !== "stdio" && mode !== "http") {
          throw new Error(`unknown transport ${mode}`);
        }
        config.transport = mode;
        break;
      }
      case "--port":
        config.port = Number(next());
        break;
      case "--log":
        config.logPath = next();
        break;
      case "--help":
      case "-h":
        process.stdout.write(USAGE);
        process.exit(0);
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (config.maxRetries < 0) throw new Error("retries must be >= 0");
  return config;
}

async function main(): Promise<void> {
  let config: AgentConfig;
  try {
    config = parseArgs(process.argv.slice(2));
  } catch (error) {
    process.stderr.write(`bridge: ${String(error)}\n${USAGE}`);
    process.exit(2);
  }
  if (config.transport === "http") {
    await runHttp(config);
  } else {
    await runStdio(config);
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  main().catch((error) => {
    process.stderr.write(`bridge: fatal: ${String(error)}\n`);
    process.exit(1);
  });
}
