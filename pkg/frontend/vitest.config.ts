import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    environment: "node",
    // the e2e suite boots the Python service once
    hookTimeout: 60_000,
  },
});
