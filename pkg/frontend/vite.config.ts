import { defineConfig } from "vitest/config";

// The dev server proxies API calls to a locally running `skelmimic serve`
// (default port 8000), so `npm run dev` works against live data.
export default defineConfig({
  // relative base so the build also works mounted at /ui/ by `skelmimic serve`
  base: "./",
  server: {
    proxy: {
      "/recordings": "http://127.0.0.1:8000",
    },
  },
  build: {
    outDir: "dist",
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
