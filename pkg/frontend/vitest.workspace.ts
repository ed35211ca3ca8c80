import { defineWorkspace } from "vitest/config";

export default defineWorkspace([
  {
    test: {
      name: "unit",
      include: ["tests/format.test.ts", "tests/layout.test.ts", "tests/state.test.ts"],
      testTimeout: 20_000,
    },
  },
  {
    test: {
      name: "e2e",
      include: ["tests/e2e.test.ts"],
      globalSetup: ["tests/e2e.setup.ts"],
      testTimeout: 60_000,
      hookTimeout: 300_000,
      pool: "forks",
      fileParallelism: false,
    },
  },
]);
