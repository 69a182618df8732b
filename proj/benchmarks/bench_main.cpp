#include <benchmark/benchmark.h>

// Linked here rather than via benchmark_main, whose packaged archive carries
// LTO bytecode from a different compiler release.
BENCHMARK_MAIN();
