#include "expsplit/benchcli.hpp"
#include "expsplit/errmodel.hpp"
#include "expsplit/padetaylor.hpp"
#include "expsplit/splitcat.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace expsplit;

StructuredOperator load_matrix_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidConfig("cannot open matrix file: " + path);
    std::string tag, kind;
    int dim = 0;
    f >> tag >> dim;
    if (tag != "n" || dim <= 0) throw InvalidConfig("matrix file: expected header 'n <dim> ...'");
    f >> tag >> kind;
    if (tag != "kind") throw InvalidConfig("matrix file: expected 'kind <...>' in header");

    auto read_complex = [&f, &path]() {
        std::string token;
        if (!(f >> token)) throw InvalidConfig("matrix file truncated: " + path);
        const auto comma = token.find(',');
        if (comma == std::string::npos)
            throw InvalidConfig("matrix file: entries must be re,im pairs");
        return Complex(std::stod(token.substr(0, comma)), std::stod(token.substr(comma + 1)));
    };

    if (kind == "diagonal") {
        Vector d(dim);
        for (int i = 0; i < dim; ++i) d[i] = read_complex();
        return StructuredOperator::diagonal(d);
    }
    if (kind == "oscillator") {
        if (dim % 2 != 0) throw InvalidConfig("oscillator matrices need even dimension");
        Vector omega(dim / 2);
        for (int i = 0; i < dim / 2; ++i) omega[i] = read_complex();
        return StructuredOperator::oscillator(omega);
    }
    if (kind == "dense") {
        std::vector<Eigen::Triplet<Complex>> entries;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const Complex v = read_complex();
                if (v != Complex(0.0)) entries.emplace_back(i, j, v);
            }
        return StructuredOperator::sparse(dim, entries, dim);
    }
    throw InvalidConfig("matrix file: unknown kind '" + kind + "'");
}

PerturbedMatrix build_problem(const std::string& matrix_arg, double eps) {
    const std::string prefix = "builtin:";
    if (matrix_arg.rfind(prefix, 0) == 0) {
        const std::string name = matrix_arg.substr(prefix.size());
        if (name == "rotation") return gen_perturbation(gen_rotation(1.0), eps);
        if (name == "rotation-large") return gen_perturbation(gen_rotation(100.0), eps);
        if (name == "dissipation") return gen_perturbation(gen_dissipation(), eps);
        if (name == "example2x2") return gen_example2x2(eps).first;
        throw InvalidConfig("unknown builtin matrix: " + name);
    }
    return gen_perturbation(load_matrix_file(matrix_arg), eps);
}

int cmd_compute(const std::string& matrix_arg, double eps, double tol, const std::string& method,
                int s_flag) {
    const PerturbedMatrix P = build_problem(matrix_arg, eps);
    const DenseMatrix ref = reference_expm(P.densify());

    SelectionPlan plan;
    if (method == "auto") {
        plan = select_method(P, tol);
    } else {
        plan.method = method;
        plan.tolerance = tol;
        try {
            const CommutatorNorms norms = commutator_norm_table(P);
            const ErrorBoundKind kind = error_bound_for(method);
            plan.s2 = s_flag >= 0 ? s_flag : choose_squarings(kind, eps, norms, tol);
            plan.predicted_error =
                error_polynomial(kind, std::pow(0.5, plan.s2), eps, norms);
        } catch (const UnknownScheme&) {
            plan.s2 = std::max(s_flag, 0);
            plan.predicted_error = -1.0;
        }
    }

    std::cout << "method          " << plan.method << "\n"
              << "squarings       " << plan.s2 << "\n"
              << "tolerance       " << plan.tolerance << "\n";
    if (plan.predicted_error >= 0.0)
        std::cout << "predicted_error " << plan.predicted_error << "\n";

    CostTally tally;
    DenseMatrix Y;
    if (plan.method == "exp_structured") {
        Y = exp_structured(P.D, 1.0, &tally).densify();
    } else if (plan.method.rfind("pade", 0) == 0) {
        Y = expm_standard(P.densify(), tol, tally);
    } else {
        const Catalog& cat = catalog();
        const double h = std::pow(0.5, plan.s2);
        bool found = false;
        for (const auto& sq : cat.squarings)
            if (sq.id == plan.method) {
                Y = run_modified_squaring(P, sq, h, plan.s2, tally, 2);
                found = true;
            }
        for (const auto& g : cat.splittings)
            if (g.id == plan.method) {
                Y = run_general_splitting(P, g, h, plan.s2, tally, 2);
                found = true;
            }
        for (const auto& pr : cat.processed)
            if (pr.id == plan.method) {
                Y = run_processed(P, pr, h, plan.s2, tally, 2);
                found = true;
            }
        if (!found) throw UnknownScheme("unknown method: " + plan.method);
    }
    std::cout << "cost_products   " << tally.dense_products() << "\n"
              << "measured_error  " << one_norm(Y - ref) / one_norm(ref) << "\n"
              << "result_norm     " << one_norm(Y) << "\n";
    return 0;
}

int cmd_bench(const ExperimentConfig& cfg) {
    const std::vector<ResultRecord> records = run_experiment(cfg);
    if (cfg.out_path.empty())
        write_csv(records, std::cout);
    else
        write_csv(records, cfg.out_path);
    return 0;
}

int cmd_order(const std::string& scheme, unsigned seed) {
    ExperimentConfig cfg;
    cfg.experiment = "order-check";
    cfg.seed = seed;
    if (!scheme.empty() && scheme != "all") cfg.schemes = {scheme};
    bool any_fail = false;
    for (const auto& r : run_experiment(cfg)) {
        std::cout << r.scheme << " component " << r.s << ": measured " << r.error << " declared "
                  << r.predicted_error << (r.failed ? "  MISMATCH" : "") << "\n";
        any_fail |= r.failed;
    }
    return any_fail ? 3 : 0;
}

int cmd_catalog() {
    const Catalog& cat = catalog();
    for (const auto& s : cat.squarings)
        std::cout << "squaring   " << s.id << "  s1=" << s.s1 << "  order=(" << s.p1 << ","
                  << s.p2 << ")" << (s.verified ? "" : "  [unverified]") << "\n";
    for (const auto& g : cat.splittings)
        std::cout << "splitting  " << g.id << "  products=" << g.chain_product_count
                  << "  order=(" << g.p1 << "," << g.p2 << ")"
                  << (g.experimental ? "  [experimental]" : "") << "\n";
    for (const auto& p : cat.processed)
        std::cout << "processed  " << p.id << "  kernel_s1=" << p.kernel.s1 << "  order=("
                  << p.p1 << "," << p.p2 << ")" << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Splitting-based exponentials of perturbed structured matrices"};
    app.require_subcommand(1);

    std::string matrix_arg = "builtin:rotation";
    double eps = 1e-3;
    double tol = 1e-6;
    std::string method = "auto";
    int s_flag = -1;
    auto* compute = app.add_subcommand("compute", "compute e^{D+eps*B} with a selected method");
    compute->add_option("--matrix", matrix_arg, "matrix file or builtin:NAME");
    compute->add_option("--eps", eps, "perturbation size");
    compute->add_option("--tol", tol, "target tolerance");
    compute->add_option("--method", method, "catalog scheme id or 'auto'");
    compute->add_option("--s", s_flag, "override squaring count (default: from error bound)");

    ExperimentConfig cfg;
    int smin = 0, smax = 8;
    auto* bench = app.add_subcommand("bench", "run an experiment sweep, emit CSV");
    bench->add_option("--experiment", cfg.experiment,
                      "longtime|rotation|rotation-large|dissipation|order-check")
        ->required();
    bench->add_option("--out", cfg.out_path, "output CSV path (default: stdout)");
    bench->add_option("--eps", cfg.eps_list, "eps values");
    bench->add_option("--tol", cfg.tolerance, "target tolerance");
    bench->add_option("--scheme", cfg.schemes, "scheme ids, 'pade', or 'auto'");
    bench->add_option("--smin", smin, "first squaring count");
    bench->add_option("--smax", smax, "last squaring count");
    bench->add_option("--seed", cfg.seed, "seed for the order-check problem");

    std::string order_scheme = "all";
    unsigned order_seed = 7;
    auto* order = app.add_subcommand("order", "measure empirical convergence orders");
    order->add_option("--scheme", order_scheme, "scheme id or 'all'");
    order->add_option("--seed", order_seed, "random problem seed");

    auto* cat = app.add_subcommand("catalog", "list the scheme catalog");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compute->parsed()) return cmd_compute(matrix_arg, eps, tol, method, s_flag);
        if (bench->parsed()) {
            if (cfg.eps_list.empty()) cfg.eps_list = {1e-3};
            if (cfg.experiment == "longtime" && smax == 8) smax = 25;
            for (int s = smin; s <= smax; ++s) cfg.s_range.push_back(s);
            return cmd_bench(cfg);
        }
        if (order->parsed()) return cmd_order(order_scheme, order_seed);
        if (cat->parsed()) return cmd_catalog();
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownScheme& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownTolerance& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
