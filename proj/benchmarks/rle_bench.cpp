// Copyright (c) 2026, The pastekit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "pastekit/rle.hpp"
#include "pastekit/rng.hpp"
#include "pastekit/synth.hpp"

namespace {

pastekit::Bitmap disc(int side) {
  return pastekit::rasterize_ellipse(side, side, side / 2.0, side / 2.0, side / 3.0, side / 4.0);
}

void BM_Encode(benchmark::State& state) {
  const auto b = disc(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pastekit::rle_encode(b));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Encode)->Arg(64)->Arg(256)->Arg(1024);

void BM_Decode(benchmark::State& state) {
  const auto m = pastekit::rle_encode(disc(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(pastekit::rle_decode(m));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Decode)->Arg(64)->Arg(256)->Arg(1024);

void BM_CompressString(benchmark::State& state) {
  const auto m = pastekit::rle_encode(disc(static_cast<int>(state.range(0))));
  for (auto _ : state) {
    const auto s = pastekit::rle_compress_string(m);
    benchmark::DoNotOptimize(pastekit::rle_decompress_string(s, m.height(), m.width()));
  }
}
BENCHMARK(BM_CompressString)->Arg(256)->Arg(1024);

void BM_MergeSubtract(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto a = pastekit::rle_encode(disc(side));
  const auto b = pastekit::rle_encode(pastekit::rasterize_rect(side, side, side / 3, 0, side / 2, side));
  for (auto _ : state) benchmark::DoNotOptimize(pastekit::rle_merge(a, b, pastekit::MaskOp::Subtract));
}
BENCHMARK(BM_MergeSubtract)->Arg(256)->Arg(1024);

}  // namespace
