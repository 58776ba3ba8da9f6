import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    // the timing test runs a few trials against real timers
    testTimeout: 20000,
  },
});
