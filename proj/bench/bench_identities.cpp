#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "qmk/document.hpp"
#include "qmk/two_layer.hpp"

namespace {

qmk::VectorField load(const std::string& name) {
  std::ifstream in(std::string(QMK_DATA_DIR) + "/" + name + ".qmk");
  std::stringstream ss;
  ss << in.rdbuf();
  return qmk::parse_document(ss.str()).field("Q");
}

// generic 16-scalar model and a homological family, both N = 2
const char* kCharts[] = {"model_general", "model_family"};

struct Setup {
  qmk::HigherAlgebroid algebroid;
  qmk::SampleSet samples;
};

Setup setup(int chart, std::size_t random) {
  qmk::HigherAlgebroid a(load(kCharts[chart]), qmk::Validation::shape_only);
  auto s = qmk::basis_samples(a);
  s.tuples = qmk::random_samples(a, random, 1);
  return {std::move(a), std::move(s)};
}

void BM_VerifySerial(benchmark::State& state) {
  auto [a, s] = setup(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(qmk::verify_two_layer_serial(a, s));
}

void BM_VerifyParallel(benchmark::State& state) {
  auto [a, s] = setup(static_cast<int>(state.range(0)), static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(qmk::verify_two_layer(a, s));
}

void BM_TablesSerial(benchmark::State& state) {
  qmk::HigherAlgebroid a(load(kCharts[state.range(0)]), qmk::Validation::shape_only);
  for (auto _ : state) benchmark::DoNotOptimize(qmk::two_layer_serial(a));
}

void BM_TablesParallel(benchmark::State& state) {
  qmk::HigherAlgebroid a(load(kCharts[state.range(0)]), qmk::Validation::shape_only);
  for (auto _ : state) benchmark::DoNotOptimize(qmk::two_layer(a));
}

}  // namespace

BENCHMARK(BM_VerifySerial)->ArgsProduct({{0, 1}, {0, 200}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyParallel)->ArgsProduct({{0, 1}, {0, 200}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TablesSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TablesParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
