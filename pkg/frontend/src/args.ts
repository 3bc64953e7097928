/** Tiny flag parser: --key value (repeatable) and boolean --key. */

export interface Flags {
  inputs: string[];
  out: string;
  extra: Map<string, string>;
}

export function parseFlags(argv: string[], usage: string): Flags {
  const inputs: string[] = [];
  let out = "";
  const extra = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) {
      throw new Error(`unexpected argument ${arg}\n${usage}`);
    }
    const key = arg.slice(2);
    const value = argv[i + 1];
    if (value === undefined || value.startsWith("--")) {
      throw new Error(`flag --${key} needs a value\n${usage}`);
    }
    i++;
    if (key === "input") inputs.push(value);
    else if (key === "out") out = value;
    else extra.set(key, value);
  }
  if (inputs.length === 0 || !out) {
    throw new Error(`--input and --out are required\n${usage}`);
  }
  return { inputs, out, extra };
}

export function runMain(main: () => void): void {
  try {
    main();
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    process.exit(1);
  }
}
