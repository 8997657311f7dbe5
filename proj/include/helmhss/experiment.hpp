#ifndef HELMHSS_EXPERIMENT_HPP
#define HELMHSS_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "helmhss/hss.hpp"

namespace helmhss {

struct ExperimentConfig {
    Formulation formulation = Formulation::primal;
    SourceType source = SourceType::uniform;
    double k = 16.0;
    double theta = 1.0;
    double c0 = 1.0;
    double delta_hat = 2.0;
    InnerKind inner = InnerKind::direct;
    int mg_levels = 4;
    int mg_smooth = 0; // 0 -> formulation default (5 primal, 4 mixed)
    int mg_cycles = 0; // 0 -> formulation default (1 primal, 2 mixed)
    double rtol = 1e-6;
    std::uint64_t seed = 1234;
    int maxiter = 200;
    bool collect_mg_ratios = false;

    int resolved_mg_smooth() const;
    int resolved_mg_cycles() const;
    int n_inner() const;
    int resolution() const; // cells per direction for this run
};

struct ExperimentReport {
    ExperimentConfig config;
    int n = 0;
    int dofs = 0;
    int outer_iterations = 0;
    long inner_steps = 0;
    long mg_cycles = 0;
    double eta_h = 0.0;
    double eta_s = 0.0;
    double eta_mg = 0.0;
    bool converged = false;
    bool used_iterative_fallback = false;
    double seconds = 0.0;
    std::vector<double> outer_residuals;
    std::vector<double> mg_ratios;
    CVector solution; // primal: CG1 coefficients; mixed: stacked (sigma, u)
};

/// Mesh, assembled forms, outer operator and the factored (or multigrid)
/// inner solver for one problem family. Runs differing only in theta,
/// source or seed share a setup.
struct ProblemSetup {
    ExperimentConfig config; // fields that shaped the setup
    Mesh mesh;
    DofMap cg1, dg0;
    AssembledForms forms;
    ComplexSparseMatrix outer_primal; // primal only
    ShiftedPrimalSystem primal_sys;   // primal only
    ShiftedMixedSystem mixed_sys;     // mixed only
    std::unique_ptr<InnerSolver> inner;
    bool used_iterative_fallback = false;
};

/// One-slot setup cache; the big direct factorizations dominate setup
/// cost, so table and acceptance runs reuse them across theta/source.
class ExperimentContext {
public:
    std::shared_ptr<ProblemSetup> get_or_build(const ExperimentConfig& config);
    void clear();

private:
    std::string key_;
    std::shared_ptr<ProblemSetup> setup_;
};

std::shared_ptr<ProblemSetup> build_problem_setup(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config,
                                ExperimentContext* ctx = nullptr);

extern const char* const report_csv_header;
std::string report_csv_row(const ExperimentReport& report);

struct TableResult {
    std::string name;
    std::string text; // formatted table
    std::string csv;  // sidecar
};

/// Reproduces one of the iteration-count / rate tables. Valid names:
/// primal-direct, mixed-direct, primal-mg, mixed-mg, hss-rates,
/// outer-rates.
TableResult reproduce_table(const std::string& name, const std::vector<double>& k_list,
                            ExperimentContext* ctx = nullptr, std::ostream* progress = nullptr);

} // namespace helmhss

#endif
