#include "helmhss/experiment.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "helmhss/krylov.hpp"

namespace helmhss {

int ExperimentConfig::resolved_mg_smooth() const
{
    if (mg_smooth > 0) return mg_smooth;
    return formulation == Formulation::primal ? 5 : 4;
}

int ExperimentConfig::resolved_mg_cycles() const
{
    if (mg_cycles > 0) return mg_cycles;
    return formulation == Formulation::primal ? 1 : 2;
}

int ExperimentConfig::n_inner() const
{
    HssConfig h;
    h.k = k;
    h.theta = theta;
    return h.n_inner();
}

int ExperimentConfig::resolution() const
{
    return resolution_for(k, c0, inner == InnerKind::multigrid ? mg_levels : 1);
}

namespace {

std::string setup_key(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << (c.formulation == Formulation::primal ? "primal" : "mixed") << '|' << c.k << '|'
       << c.c0 << '|' << c.delta_hat << '|'
       << (c.inner == InnerKind::direct ? "direct" : "mg");
    if (c.inner == InnerKind::multigrid)
        os << '|' << c.mg_levels << '|' << c.resolved_mg_smooth() << '|'
           << c.resolved_mg_cycles();
    return os.str();
}

// Uniform [-1,1] from the top 53 bits of a mt19937_64 draw; the library
// distributions are implementation-defined, this is not.
double uniform_pm1(std::mt19937_64& rng)
{
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

CVector random_complex_vector(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    CVector x(n);
    for (auto& v : x) {
        const double re = uniform_pm1(rng);
        const double im = uniform_pm1(rng);
        v = Complex(re, im);
    }
    return x;
}

} // namespace

std::shared_ptr<ProblemSetup> build_problem_setup(const ExperimentConfig& config)
{
    auto setup = std::make_shared<ProblemSetup>();
    setup->config = config;
    const int n = config.resolution();
    setup->mesh = build_mesh(n);
    setup->cg1 = make_cg1_dofmap(setup->mesh);
    setup->dg0 = make_dg0v2_dofmap(setup->mesh);
    setup->forms = assemble_core(setup->mesh, setup->cg1, setup->dg0);

    const ComplexSparseMatrix* lhs = nullptr;
    if (config.formulation == Formulation::primal) {
        setup->outer_primal = assemble_primal_operator(setup->forms, config.k, 0.0);
        setup->primal_sys = build_shifted_primal_system(setup->forms, config.k, config.delta_hat);
        lhs = &setup->primal_sys.lhs;
    } else {
        setup->mixed_sys = build_shifted_mixed_system(setup->forms, config.k, config.delta_hat);
        lhs = &setup->mixed_sys.lhs;
    }

    if (config.inner == InnerKind::direct) {
        try {
            setup->inner = std::make_unique<DirectInnerSolver>(*lhs);
        } catch (const BandedPivotError&) {
            setup->inner = std::make_unique<IterativeInnerSolver>(*lhs);
            setup->used_iterative_fallback = true;
        }
    } else {
        const MeshHierarchy meshes = build_hierarchy(n, config.mg_levels);
        const double k = config.k, dh = config.delta_hat;
        LevelOperatorBuilder build_op;
        if (config.formulation == Formulation::primal)
            build_op = [k, dh](const AssembledForms& f) { return assemble_hss_primal(f, k, dh).lhs; };
        else
            build_op = [k, dh](const AssembledForms& f) {
                return assemble_mixed_eliminated_lhs(f, k, dh);
            };
        MgHierarchy hier = build_mg_hierarchy(meshes, config.resolved_mg_smooth(), build_op);
        setup->inner = std::make_unique<MultigridInnerSolver>(std::move(hier),
                                                              config.resolved_mg_cycles());
    }
    return setup;
}

std::shared_ptr<ProblemSetup> ExperimentContext::get_or_build(const ExperimentConfig& config)
{
    const std::string key = setup_key(config);
    if (key != key_ || !setup_) {
        setup_.reset(); // release the previous factorization before building
        setup_ = build_problem_setup(config);
        key_ = key;
    }
    return setup_;
}

void ExperimentContext::clear()
{
    setup_.reset();
    key_.clear();
}

ExperimentReport run_experiment(const ExperimentConfig& config, ExperimentContext* ctx)
{
    const auto t0 = std::chrono::steady_clock::now();

    std::shared_ptr<ProblemSetup> setup =
        ctx ? ctx->get_or_build(config) : build_problem_setup(config);

    ExperimentReport rep;
    rep.config = config;
    rep.n = setup->mesh.n;
    rep.used_iterative_fallback = setup->used_iterative_fallback;

    const CVector load = assemble_load(setup->mesh, setup->cg1, config.source);
    const std::size_t n_u = static_cast<std::size_t>(setup->cg1.n_dofs);

    CVector b;
    LinOp apply_A;
    MixedOperator mixed_op(setup->forms, config.k, 0.0);
    if (config.formulation == Formulation::primal) {
        b = load;
        const ComplexSparseMatrix& B0 = setup->outer_primal;
        apply_A = [&B0](std::span<const Complex> x, std::span<Complex> y) { spmv(B0, x, y); };
        rep.dofs = static_cast<int>(n_u);
    } else {
        const std::size_t n_sigma = setup->forms.Msigma.size();
        b.assign(n_sigma + n_u, Complex(0.0));
        const Complex f_scale = Complex(0.0, 1.0) / config.k; // 1/(0 - ik)
        for (std::size_t i = 0; i < n_u; ++i) b[n_sigma + i] = f_scale * load[i];
        apply_A = [&mixed_op](std::span<const Complex> x, std::span<Complex> y) {
            mixed_op.apply(x, y);
        };
        rep.dofs = static_cast<int>(n_sigma + n_u);
    }

    if (norm2(b) == 0.0) {
        // zero source: zero solution, no iterations
        rep.solution.assign(b.size(), Complex(0.0));
        rep.converged = true;
        rep.outer_residuals.push_back(0.0);
        rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

    const CVector x0 = random_complex_vector(b.size(), config.seed);

    const int n_inner = config.n_inner();
    std::unique_ptr<HssPreconditioner> prec;
    if (config.formulation == Formulation::primal)
        prec = std::make_unique<HssPreconditioner>(setup->primal_sys, *setup->inner, n_inner);
    else
        prec = std::make_unique<HssPreconditioner>(setup->mixed_sys, *setup->inner, n_inner);

    // per-run accounting even when the inner solver is shared via a context
    const long cycles_before = setup->inner->cycles_used();
    RateAccumulator* mg_acc = setup->inner->mg_contraction();
    const double mg_log_before = mg_acc ? mg_acc->log_sum : 0.0;
    const long mg_count_before = mg_acc ? mg_acc->count : 0;
    std::vector<double> mg_ratios;
    if (mg_acc && config.collect_mg_ratios) mg_acc->ratios = &mg_ratios;

    const LinOp apply_P = [&prec](std::span<const Complex> r, std::span<Complex> z) {
        prec->apply(r, z);
    };

    KrylovConfig kcfg;
    kcfg.rtol = config.rtol;
    kcfg.maxiter = config.maxiter;
    FgmresResult result = fgmres(apply_A, b, x0, kcfg, apply_P);

    if (mg_acc) mg_acc->ratios = nullptr;

    rep.outer_iterations = result.trace.iterations;
    rep.converged = result.trace.converged;
    rep.inner_steps = prec->total_steps();
    rep.mg_cycles = setup->inner->cycles_used() - cycles_before;
    rep.eta_s = prec->eta_s();
    if (mg_acc && mg_acc->count > mg_count_before)
        rep.eta_mg = std::exp((mg_acc->log_sum - mg_log_before) /
                              static_cast<double>(mg_acc->count - mg_count_before));
    if (result.trace.residuals.size() >= 2) rep.eta_h = rate(result.trace.residuals);
    rep.outer_residuals = std::move(result.trace.residuals);
    rep.mg_ratios = std::move(mg_ratios);
    rep.solution = std::move(result.x);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

const char* const report_csv_header =
    "k,theta,c0,delta_hat,formulation,source,inner,outer_its,inner_total,mg_cycles,"
    "eta_h,eta_s,eta_mg,dofs,seconds";

std::string report_csv_row(const ExperimentReport& r)
{
    std::ostringstream os;
    os << std::setprecision(17);
    const auto& c = r.config;
    os << c.k << ',' << c.theta << ',' << c.c0 << ',' << c.delta_hat << ','
       << (c.formulation == Formulation::primal ? "primal" : "mixed") << ','
       << (c.source == SourceType::uniform ? "uniform"
                                           : (c.source == SourceType::box ? "box" : "zero"))
       << ',' << (c.inner == InnerKind::direct ? "direct" : "mg") << ',' << r.outer_iterations
       << ',' << r.inner_steps << ',' << r.mg_cycles << ',' << r.eta_h << ',' << r.eta_s << ','
       << r.eta_mg << ',' << r.dofs << ',' << r.seconds;
    return os.str();
}

namespace {

struct TableSpec {
    Formulation formulation;
    InnerKind inner;
    bool rates = false;  // hss-rates / outer-rates style
    bool outer_rate = false;
};

ExperimentConfig make_config(Formulation form, SourceType src, double k, double theta,
                             InnerKind inner)
{
    ExperimentConfig c;
    c.formulation = form;
    c.source = src;
    c.k = k;
    c.theta = theta;
    c.inner = inner;
    return c;
}

std::string its_cell(const ExperimentReport& r)
{
    const long total = r.config.inner == InnerKind::direct ? r.inner_steps : r.mg_cycles;
    std::ostringstream os;
    os << r.outer_iterations << " (" << total << ")";
    return os.str();
}

} // namespace

TableResult reproduce_table(const std::string& name, const std::vector<double>& k_list,
                            ExperimentContext* ctx, std::ostream* progress)
{
    ExperimentContext local;
    if (!ctx) ctx = &local;

    TableResult out;
    out.name = name;
    std::ostringstream text, csv;
    text << std::left;

    const std::vector<double> thetas = {0.5, 1.0, 1.5};
    const std::vector<SourceType> sources = {SourceType::uniform, SourceType::box};

    auto run = [&](const ExperimentConfig& c) {
        if (progress)
            *progress << "  running k=" << c.k << " theta=" << c.theta << " "
                      << (c.source == SourceType::uniform ? "uniform" : "box") << "..."
                      << std::endl;
        return run_experiment(c, ctx);
    };

    if (name == "primal-direct" || name == "mixed-direct" || name == "primal-mg" ||
        name == "mixed-mg") {
        const Formulation form =
            name.starts_with("primal") ? Formulation::primal : Formulation::mixed;
        const InnerKind inner = name.ends_with("-mg") ? InnerKind::multigrid : InnerKind::direct;

        text << std::setw(6) << "k";
        for (const char* s : {"uniform", "box"})
            for (const char* t : {"theta=1/2", "theta=1", "theta=3/2"})
                text << std::setw(16) << (std::string(s) + " " + t);
        text << '\n';
        csv << report_csv_header << '\n';

        for (double k : k_list) {
            text << std::setw(6) << k;
            for (SourceType src : sources)
                for (double theta : thetas) {
                    const auto rep = run(make_config(form, src, k, theta, inner));
                    text << std::setw(16) << its_cell(rep);
                    csv << report_csv_row(rep) << '\n';
                }
            text << '\n';
        }
    } else if (name == "hss-rates" || name == "outer-rates") {
        const bool outer = (name == "outer-rates");
        text << std::setw(6) << "k";
        if (!outer) text << std::setw(10) << "nu_s";
        for (const char* c :
             {"primal-uniform", "primal-box", "mixed-uniform", "mixed-box"})
            text << std::setw(16) << c;
        text << '\n';
        csv << report_csv_header << '\n';

        for (double k : k_list) {
            text << std::setw(6) << k;
            if (!outer)
                text << std::setw(10) << std::setprecision(4) << std::fixed
                     << hss_contraction_bound(k) << std::defaultfloat;
            for (Formulation form : {Formulation::primal, Formulation::mixed})
                for (SourceType src : sources) {
                    const auto rep = run(make_config(form, src, k, 1.0, InnerKind::direct));
                    text << std::setw(16) << std::setprecision(4) << std::fixed
                         << (outer ? rep.eta_h : rep.eta_s) << std::defaultfloat;
                    csv << report_csv_row(rep) << '\n';
                }
            text << '\n';
        }
    } else {
        throw std::invalid_argument("reproduce_table: unknown table name " + name);
    }

    out.text = text.str();
    out.csv = csv.str();
    return out;
}

} // namespace helmhss
