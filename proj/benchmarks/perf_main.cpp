#include <benchmark/benchmark.h>

#include "lsm/benchmark_cases.hpp"
#include "lsm/lattice.hpp"
#include "lsm/unit_cell.hpp"

namespace {

lsm::UnitCellMatrix modified_cell(double nu) {
  const lsm::MaterialParams m{2e11, nu, 0.01, lsm::PlaneRegime::plane_stress};
  return lsm::cell_matrix(lsm::calibrate(m, lsm::BondModel::modified).stiffness);
}

void BM_UnitCellEigen(benchmark::State& state) {
  const auto cell = modified_cell(0.3);
  for (auto _ : state) {
    auto rep = lsm::eigen_analysis(cell);
    benchmark::DoNotOptimize(rep.by_form);
  }
}
BENCHMARK(BM_UnitCellEigen);

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = lsm::build_mesh({4 * n, n, 0.5 / (4 * n), Eigen::Vector2d::Zero()});
  const auto cell = modified_cell(0.3);
  for (auto _ : state) {
    auto sys = lsm::assemble(mesh, cell);
    benchmark::DoNotOptimize(sys.stiffness.nonZeros());
  }
  state.SetComplexityN(mesh.dof_count());
}
BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_SolveCantilever(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto c = lsm::default_case(lsm::CaseKind::cantilever, 0.3);
  const auto mesh = lsm::case_mesh(c, {4 * n, n});
  auto sys = lsm::apply_loads(lsm::assemble(mesh, modified_cell(0.3)), mesh, lsm::case_loads(c),
                              c.material.thickness);
  const auto reduced = lsm::apply_constraints(sys, lsm::case_supports(c, mesh));
  for (auto _ : state) {
    auto res = lsm::solve(reduced);
    benchmark::DoNotOptimize(res.relative_residual);
  }
  state.SetComplexityN(mesh.dof_count());
}
BENCHMARK(BM_SolveCantilever)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_RunBendingSweep(benchmark::State& state) {
  const auto c = lsm::default_case(lsm::CaseKind::pure_bending, 0.3);
  for (auto _ : state) {
    auto rep = lsm::run_case(c, lsm::BondModel::modified);
    benchmark::DoNotOptimize(rep.runs.back().field_error);
  }
}
BENCHMARK(BM_RunBendingSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
