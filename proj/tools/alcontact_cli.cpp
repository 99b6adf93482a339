// Convergence-study driver for the augmented-Lagrangian contact solvers.
//
//   alcontact study smooth-obstacle --levels 4 --out results/

#include <alcontact/alcontact.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct StudyArgs
{
    std::string problem;
    std::optional<int> levels;
    std::optional<int> first_level;
    std::optional<double> gamma0;
    std::optional<double> gamma_exponent;
    double delta = 1.0;
    std::string formulation = "f1";
    double tol = 1e-10;
    int max_newton = 100;
    double damping = 1.0;
    int overkill_extra = 2;
    std::string out = ".";
    bool dump_solution = false;
    bool dump_mesh = false;
};

void print_table(const alcontact::ConvergenceTable& t)
{
    std::printf("%-6s %8s %12s %14s %14s %8s %8s %7s %s\n", "level", "nno", "h", "err_l2", "err_h1", "ord_l2",
                "ord_h1", "newton", "");
    for (const auto& r : t.rows)
    {
        char o2[16] = "", o1[16] = "";
        if (r.ord_l2)
            std::snprintf(o2, sizeof o2, "%.3f", *r.ord_l2);
        if (r.ord_h1)
            std::snprintf(o1, sizeof o1, "%.3f", *r.ord_h1);
        std::printf("%-6d %8d %12.5e %14.6e %14.6e %8s %8s %7d %s\n", r.level, r.nno, r.h, r.err_l2, r.err_h1, o2, o1,
                    r.newton_its, r.converged ? "" : "NOT CONVERGED");
    }
}

int run_study_command(const StudyArgs& a)
{
    using namespace alcontact;

    const ProblemSpec problem = problem_by_name(a.problem);

    ContactConfig cfg;
    cfg.formulation = parse_formulation(a.formulation);
    cfg.delta = a.delta;
    cfg.gamma_exponent = a.gamma_exponent.value_or(problem.gamma_exponent);
    // F2 needs a large gamma0; the problem defaults are tuned for F1.
    cfg.gamma0 = a.gamma0.value_or(is_f1_family(cfg.formulation) ? problem.gamma0 : 10.0);

    StudyOptions opts;
    opts.first_level = a.first_level.value_or(problem.first_level);
    opts.levels = a.levels.value_or(problem.levels);
    opts.overkill_extra = a.overkill_extra;
    opts.settings.tol_residual = a.tol;
    opts.settings.max_newton = a.max_newton;
    opts.settings.damping = a.damping;

    const std::filesystem::path out = a.out;
    std::filesystem::create_directories(out);

    const int finest = opts.first_level + opts.levels - 1;
    opts.on_level = [&](const LevelResult& lr) {
        std::fprintf(stderr, "level %d: %d nodes, gamma=%.3e, %d newton its, |G|=%.3e%s\n", lr.level,
                     lr.mesh.num_vertices(), lr.config.gamma, lr.report.iterations, lr.report.final_residual,
                     lr.report.converged ? "" : " (not converged)");
        if (lr.level != finest)
            return;
        if (a.dump_solution)
        {
            std::ofstream f(out / (problem.name + "_solution.dat"));
            write_solution(f, lr.mesh, lr.system.full_primal(lr.solution.u));
        }
        if (a.dump_mesh)
        {
            std::ofstream f(out / (problem.name + "_mesh.txt"));
            write_mesh(f, lr.mesh);
        }
    };

    std::fprintf(stderr, "%s: formulation %s, gamma = %g h^%g, delta = %g, levels %d..%d\n", problem.name.c_str(),
                 to_string(cfg.formulation), cfg.gamma0, cfg.gamma_exponent, cfg.delta, opts.first_level, finest);
    const auto t0 = std::chrono::steady_clock::now();
    const ConvergenceTable table = run_study(problem, cfg, opts);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    print_table(table);
    const auto paths = default_output_paths(out, problem.name);
    emit_outputs(table, paths);
    std::fprintf(stderr, "wrote %s and %s (%.1f s)\n", paths.csv.string().c_str(), paths.svg.string().c_str(), secs);

    return table.all_converged() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Augmented-Lagrangian contact solvers: convergence studies"};
    app.require_subcommand(1);

    StudyArgs a;
    auto* study = app.add_subcommand("study", "Run a refinement study and write CSV/SVG outputs");
    study->add_option("problem", a.problem, "Benchmark problem")
        ->required()
        ->check(CLI::IsMember({"smooth-obstacle", "nonsmooth-obstacle", "signorini"}));
    study->add_option("--levels", a.levels, "Number of refinement levels")->check(CLI::Range(2, 12));
    study->add_option("--first-level", a.first_level, "Coarsest refinement level")->check(CLI::Range(0, 12));
    study->add_option("--gamma0", a.gamma0, "Augmentation scale gamma0")->check(CLI::PositiveNumber);
    study->add_option("--delta", a.delta, "Stabilization weight")->check(CLI::NonNegativeNumber)->capture_default_str();
    study->add_option("--gamma-exponent", a.gamma_exponent, "gamma = gamma0 h^E");
    study->add_option("--formulation", a.formulation, "Contact formulation")
        ->check(CLI::IsMember({"f1", "f2", "f1-alt", "f2-alt"}))
        ->capture_default_str();
    study->add_option("--tol", a.tol, "Newton residual tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    study->add_option("--max-newton", a.max_newton, "Newton iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    study->add_option("--damping", a.damping, "Newton step damping in (0,1]")->check(CLI::Range(1e-6, 1.0))->capture_default_str();
    study->add_option("--overkill-extra", a.overkill_extra, "Extra refinements of the overkill reference")
        ->check(CLI::Range(1, 6))
        ->capture_default_str();
    study->add_option("--out", a.out, "Output directory")->capture_default_str();
    study->add_flag("--dump-solution", a.dump_solution, "Write (x, y, u_h) triples of the finest level");
    study->add_flag("--dump-mesh", a.dump_mesh, "Write the finest mesh");

    CLI11_PARSE(app, argc, argv);

    try
    {
        return run_study_command(a);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
