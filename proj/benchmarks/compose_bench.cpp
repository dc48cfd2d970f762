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

#include <mutex>
#include <unordered_map>

#include <benchmark/benchmark.h>

#include "pastekit/composer.hpp"
#include "pastekit/error.hpp"
#include "pastekit/synth.hpp"

namespace {

class MemorySource final : public pastekit::ImageSource {
 public:
  std::unordered_map<std::string, pastekit::Image> images;
  bool exists(const std::string& p) const override { return images.contains(p); }
  pastekit::Image load(const std::string& p) const override {
    const auto it = images.find(p);
    if (it == images.end()) throw pastekit::IoError("missing " + p);
    return it->second;
  }
};

struct Scene {
  pastekit::PoolManifest pool;
  MemorySource instances;
  pastekit::ScaleStats stats;
};

Scene& scene() {
  static Scene s = [] {
    Scene out;
    pastekit::SynthSpec spec;
    spec.per_category = 20;
    auto p = pastekit::generate_pool(spec);
    out.pool = p.manifest;
    for (const auto& r : out.pool.records)
      out.instances.images.emplace(r.image_path, pastekit::Image(r.width, r.height, {200, 40, 40}));
    out.stats.global = {0.15, 0.05, 1};
    return out;
  }();
  return s;
}

void BM_RenderSample(benchmark::State& state) {
  auto& s = scene();
  const pastekit::PoolIndex index(s.pool);
  const pastekit::Image background(640, 640, {90, 90, 90});
  pastekit::ComposeConfig cfg;
  cfg.n_max = static_cast<int>(state.range(0));
  std::uint64_t k = 0;
  for (auto _ : state) {
    pastekit::Rng rng(pastekit::sample_seed(1, static_cast<std::int64_t>(k++), 0));
    const auto plan = pastekit::plan_sample(rng, index, s.stats, {1, 640, 640, "bg"}, {}, cfg);
    benchmark::DoNotOptimize(pastekit::render(plan, index, s.instances, background, {}, cfg));
  }
}
BENCHMARK(BM_RenderSample)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_UpdateAnnotations(benchmark::State& state) {
  std::vector<pastekit::PastedMask> pasted;
  for (int i = 0; i < state.range(0); ++i) {
    const auto b = pastekit::rasterize_ellipse(640, 640, 30.0 * i + 40, 20.0 * i + 40, 60, 45);
    pasted.push_back({1, pastekit::rle_encode(b)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(pastekit::update_annotations({}, pasted, 0.0, 1));
}
BENCHMARK(BM_UpdateAnnotations)->Arg(5)->Arg(20);

}  // namespace
