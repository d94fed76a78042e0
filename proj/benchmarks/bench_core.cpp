#include <benchmark/benchmark.h>

#include <random>

#include "bloch/cochain.hpp"
#include "bloch/regulator.hpp"

using namespace bloch;

namespace {

NumberField example_field() { return NumberField::create({1, -2, 2, -1, 1}); }

ExtBlochSum example_alpha(const MultBasis& B) {
  ExtBlochSum s(B);
  s.add(1, make_flattening(ExtElement(0, {1}), ExtElement(4, {2}), B));
  s.add(2, make_flattening(ExtElement(3, {-2}), ExtElement(1, {-3}), B));
  s.add_chi(ExtElement(0, {1}), -3);
  return s;
}

void BM_Li2(benchmark::State& state) {
  const auto digits = static_cast<unsigned>(state.range(0));
  PrecisionScope scope(work_digits(digits));
  const Complex z(Real("0.3"), Real("0.8"));
  for (auto _ : state) benchmark::DoNotOptimize(li2(z, digits));
}
BENCHMARK(BM_Li2)->Arg(30)->Arg(50)->Arg(100);

void BM_RegVectorExample(benchmark::State& state) {
  const auto digits = static_cast<unsigned>(state.range(0));
  NumberField F = example_field();
  MultBasis B = MultBasis::create(F, {F.element({1, -2, 0, -1})}, true);
  const ExtBlochSum a = example_alpha(B);
  for (auto _ : state) benchmark::DoNotOptimize(reg_vector(a, digits));
}
BENCHMARK(BM_RegVectorExample)->Arg(30)->Arg(50);

void BM_NuHatDecision(benchmark::State& state) {
  NumberField F = example_field();
  MultBasis B = MultBasis::create(F, {F.element({1, -2, 0, -1})}, true);
  const ExtBlochSum a = example_alpha(B);
  for (auto _ : state) benchmark::DoNotOptimize(is_in_Bhat(a));
}
BENCHMARK(BM_NuHatDecision);

void BM_FieldMultiply(benchmark::State& state) {
  NumberField F = example_field();
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> d(-1000, 1000);
  auto rnd = [&] { return F.element({d(rng), d(rng), d(rng), d(rng)}); };
  const FieldElement a = rnd(), b = rnd();
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_FieldMultiply);

void BM_FieldInverse(benchmark::State& state) {
  NumberField F = example_field();
  const FieldElement a = F.element({3, -7, 2, 5});
  for (auto _ : state) benchmark::DoNotOptimize(a.inverse());
}
BENCHMARK(BM_FieldInverse);

void BM_FlagBoundary(benchmark::State& state) {
  NumberField Q = NumberField::create({0, 1});
  std::mt19937 rng(4);
  std::uniform_int_distribution<int> d(-5, 5);
  std::array<Basis3, 5> F;
  std::vector<Vec3> all;
  do {
    all.clear();
    for (auto& b : F)
      for (auto& v : b) {
        v = {Q.from_rational(d(rng)), Q.from_rational(d(rng)), Q.from_rational(d(rng))};
        all.push_back(v);
      }
  } while (!general_position(all));
  for (auto _ : state) {
    Logarithm log = Logarithm::rational(Q);
    benchmark::DoNotOptimize(flag_boundary_check(F, log));
  }
}
BENCHMARK(BM_FlagBoundary)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
