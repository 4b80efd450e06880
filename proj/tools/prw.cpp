// prw: command-line front door for the persistent-random-walk toolkit.
// Subcommands read JSON models/params and write CSV/JSON artifacts plus a
// manifest sufficient to reproduce the run byte-for-byte.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "prw/counterexample.hpp"
#include "prw/criteria.hpp"
#include "prw/json_io.hpp"
#include "prw/montecarlo.hpp"
#include "prw/skeleton.hpp"
#include "prw/spectral.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0, kExitError = 1, kExitUndecided = 2;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct RunContext {
    std::string out_dir = "out";
    json manifest;

    void note_input(const std::string& path, const std::string& text) {
        manifest["inputs"][path] = {{"bytes", text.size()}, {"fnv1a", fnv1a(text)}};
    }
    std::string read_input(const std::string& path) {
        std::string text = prw::read_text_file(path);
        note_input(path, text);
        return text;
    }
    void write(const std::string& name, const std::string& text) {
        fs::create_directories(out_dir);
        prw::write_text_file((fs::path(out_dir) / name).string(), text);
    }
    void finish(const std::string& command) {
        manifest["version"] = kVersion;
        manifest["command"] = command;
        write("manifest.json", manifest.dump(2) + "\n");
    }
};

std::string csv_escape_free(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* verdict_name(prw::Verdict v) {
    switch (v) {
        case prw::Verdict::RecurrentAtN: return "recurrent_at_N";
        case prw::Verdict::TransientAtN: return "transient_at_N";
        default: return "undecided";
    }
}

int cmd_simulate(RunContext& ctx, const std::string& model_path, std::uint64_t horizon,
                 std::uint64_t trials, std::uint64_t seed, int jobs, bool dichotomy) {
    auto model = prw::model_from_json(ctx.read_input(model_path));
    auto qc = prw::as_quadcomb(model);
    prw::EnsembleOptions opts;
    opts.jobs = jobs;
    auto diags = prw::ensemble(qc, horizon, trials, seed, opts);
    std::string csv = "trial,returns_to_origin,last_return_time,min_dist_after_burnin\n";
    for (std::size_t t = 0; t < diags.size(); ++t)
        csv += std::to_string(t) + "," + std::to_string(diags[t].returns_to_origin) + "," +
               std::to_string(diags[t].last_return_time) + "," +
               csv_escape_free(diags[t].min_dist_after_burnin) + "\n";
    ctx.write("diagnostics.csv", csv);
    auto s = prw::summarize(diags);
    json summary{{"trials", s.trials},
                 {"return_fraction", s.return_fraction},
                 {"mean_returns", s.mean_returns},
                 {"mean_last_return", s.mean_last_return},
                 {"min_dist_q25", s.min_dist_q25},
                 {"min_dist_q50", s.min_dist_q50},
                 {"min_dist_q75", s.min_dist_q75}};
    ctx.write("summary.json", summary.dump(2) + "\n");
    if (dichotomy) {
        auto rep = prw::dichotomy_probe(qc, horizon, trials, seed, jobs);
        json dj{{"return_fraction", rep.return_fraction},
                {"spread", rep.spread},
                {"max_gap", rep.max_gap},
                {"clustered", rep.clustered}};
        ctx.write("dichotomy.json", dj.dump(2) + "\n");
    }
    ctx.manifest["seed"] = seed;
    ctx.manifest["horizon"] = horizon;
    ctx.manifest["trials"] = trials;
    ctx.finish("simulate");
    return kExitOk;
}

int cmd_skeleton(RunContext& ctx, const std::string& model_path, std::uint64_t steps,
                 std::uint64_t seed) {
    auto model = prw::model_from_json(ctx.read_input(model_path));
    auto qc = prw::as_quadcomb(model);
    auto tr = prw::simulate_prw(qc, steps, seed);
    auto sk = prw::extract_skeleton(tr);
    std::string csv = "n,breaking_time,config,x,y\n";
    for (std::size_t i = 0; i < sk.breaking_times.size(); ++i)
        csv += std::to_string(i) + "," + std::to_string(sk.breaking_times[i]) + "," +
               prw::config_name(sk.configs[i]) + "," + std::to_string(sk.points[i].x) + "," +
               std::to_string(sk.points[i].y) + "\n";
    ctx.write("skeleton.csv", csv);
    auto kernel = prw::build_kernel(qc);
    json kj;
    for (int i = 0; i < kernel.size(); ++i) {
        std::string row_name = prw::config_name(prw::config_from_index(kernel.states[(std::size_t)i]));
        kj["pi"][row_name] = kernel.pi(i);
        for (int j = 0; j < kernel.size(); ++j)
            kj["matrix"][row_name][prw::config_name(
                prw::config_from_index(kernel.states[(std::size_t)j]))] = kernel.matrix(i, j);
    }
    ctx.write("kernel.json", kj.dump(2) + "\n");
    ctx.manifest["seed"] = seed;
    ctx.manifest["steps"] = steps;
    ctx.finish("skeleton");
    return kExitOk;
}

int cmd_classify(RunContext& ctx, const std::string& model_path, std::int64_t n,
                 double tolerance) {
    auto model = prw::model_from_json(ctx.read_input(model_path));
    if (!std::holds_alternative<prw::DRRWSpec>(model))
        throw prw::Error("classify: the series criterion needs a 'drrw' model");
    prw::ClassifyOptions opts;
    if (tolerance > 0) opts.terms.alias_tol = tolerance;
    auto rep = prw::classify_drrw(std::get<prw::DRRWSpec>(model), n, opts);
    std::string csv = "n,a_n,b_n\n";
    for (std::size_t i = 0; i < rep.terms.a.size(); ++i)
        csv += std::to_string(i) + "," + csv_escape_free(rep.terms.a[i]) + "," +
               csv_escape_free(rep.terms.b[i]) + "\n";
    ctx.write("terms.csv", csv);
    json vj{{"verdict", verdict_name(rep.verdict)},
            {"sum_a", rep.sum_a},
            {"sum_b", rep.sum_b},
            {"slope_a", rep.slope_a},
            {"slope_b", rep.slope_b},
            {"gamma_a", rep.gamma_a},
            {"gamma_b", rep.gamma_b},
            {"tail_a", rep.tail_a},
            {"tail_b", rep.tail_b},
            {"detail", rep.detail}};
    ctx.write("verdict.json", vj.dump(2) + "\n");
    ctx.manifest["n"] = n;
    ctx.manifest["thresholds"] = {{"margin", opts.margin},
                                  {"growth_min", opts.growth_min},
                                  {"tail_tol", opts.tail_tol}};
    ctx.finish("classify");
    return rep.verdict == prw::Verdict::Undecided ? kExitUndecided : kExitOk;
}

prw::MRWModel model_to_mrw(const prw::ModelSpec& model) {
    auto qc = prw::as_quadcomb(model);
    auto kernel = prw::build_kernel(qc);
    auto laws = prw::build_jump_laws(qc, kernel);
    return prw::mrw_from_skeleton(kernel, laws);
}

int cmd_spectral(RunContext& ctx, const std::string& model_path, int grid, bool fourier) {
    auto model = prw::model_from_json(ctx.read_input(model_path));
    auto m = model_to_mrw(model);
    std::string csv = "tx,ty,lambda_re,lambda_im,gap\n";
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < grid; ++i) {
        double th = -pi + 2.0 * pi * i / grid; // includes t = 0 for even grids
        for (prw::Vec2 t : {prw::Vec2{th, 0.0}, prw::Vec2{0.0, th}}) {
            csv += csv_escape_free(t.x) + "," + csv_escape_free(t.y) + ",";
            try {
                auto pe = prw::principal_eigenvalue(m, t);
                csv += csv_escape_free(pe.lambda.real()) + "," +
                       csv_escape_free(pe.lambda.imag()) + "," + csv_escape_free(pe.gap) + "\n";
            } catch (const prw::Error&) {
                // gap closed: t left the admissible neighbourhood (e.g. a
                // periodic model at |t| = pi); record the point as such
                csv += "nan,nan,0\n";
            }
        }
    }
    ctx.write("spectral.csv", csv);
    if (fourier) {
        auto rep = prw::fourier_criterion(m);
        const char* name = rep.verdict == prw::Classification::Diverges     ? "diverges"
                           : rep.verdict == prw::Classification::Converges ? "converges"
                                                                            : "undecided";
        json fj{{"verdict", name},
                {"integral", rep.integral},
                {"periodic_flag", rep.periodic_flag},
                {"periodic_note", rep.periodic_note},
                {"detail", rep.detail}};
        ctx.write("fourier.json", fj.dump(2) + "\n");
    }
    ctx.manifest["grid"] = grid;
    ctx.finish("spectral");
    return kExitOk;
}

prw::CexParams load_cex_params(RunContext& ctx, const std::string& params_path) {
    if (params_path.empty()) return prw::CexParams{};
    return prw::cex_params_from_json(ctx.read_input(params_path));
}

int cmd_cex_build(RunContext& ctx, const std::string& params_path, int K) {
    auto seq = prw::build_sequence(load_cex_params(ctx, params_path), K);
    ctx.write("sequence.json", prw::cex_sequence_to_json(seq) + "\n");
    ctx.manifest["K"] = K;
    ctx.finish("cex build");
    return kExitOk;
}

int cmd_cex_verify(RunContext& ctx, const std::string& seq_path) {
    auto seq = prw::cex_sequence_from_json(ctx.read_input(seq_path));
    auto rows = prw::verify_constraints(seq, seq.params);
    std::string csv = "k,constraint,pass,lhs,rhs\n";
    int fails = 0;
    for (const auto& r : rows) {
        csv += std::to_string(r.k) + "," + r.name + "," + (r.pass ? "1" : "0") + "," +
               csv_escape_free(r.lhs) + "," + csv_escape_free(r.rhs) + "\n";
        fails += r.pass ? 0 : 1;
    }
    ctx.write("constraints.csv", csv);
    ctx.manifest["rows"] = rows.size();
    ctx.manifest["fails"] = fails;
    ctx.finish("cex verify");
    if (fails > 0) {
        std::fprintf(stderr, "cex verify: %d constraint rows failed\n", fails);
        return kExitError;
    }
    return kExitOk;
}

int cmd_cex_bounds(RunContext& ctx, const std::string& seq_path) {
    auto seq = prw::cex_sequence_from_json(ctx.read_input(seq_path));
    auto up = prw::bound_upper_series(seq, seq.K);
    auto lo = prw::bound_lower_terms(seq, seq.K);
    std::string csv = "k,upper_term,upper_partial,lower_term,lower_partial\n";
    for (std::size_t i = 0; i < up.terms.size(); ++i)
        csv += std::to_string(up.k[i]) + "," + csv_escape_free(up.terms[i]) + "," +
               csv_escape_free(up.partial[i]) + "," + csv_escape_free(lo.terms[i]) + "," +
               csv_escape_free(lo.partial[i]) + "\n";
    ctx.write("bounds.csv", csv);
    ctx.finish("cex bounds");
    return kExitOk;
}

int run_lemmas(RunContext& ctx, const std::string& suite, int lmax, int mmax, int nmax) {
    std::string csv = "suite,case,pass,lhs,rhs\n";
    int fails = 0;
    auto row = [&](const std::string& s, const std::string& c, bool pass, double lhs, double rhs) {
        csv += s + "," + c + "," + (pass ? "1" : "0") + "," + csv_escape_free(lhs) + "," +
               csv_escape_free(rhs) + "\n";
        fails += pass ? 0 : 1;
    };
    if (suite == "unif" || suite == "all") {
        for (int l = 2; l <= lmax; ++l)
            for (int m = 1; m <= mmax; ++m) {
                double mm, bd;
                bool ok = prw::unif_concentration_check(l, m, &mm, &bd);
                row("unif", "l=" + std::to_string(l) + ";m=" + std::to_string(m), ok, mm, bd);
            }
    }
    if (suite == "binom" || suite == "all") {
        for (int n = 1; n <= nmax; ++n)
            for (int pi10 = 1; pi10 <= 50; ++pi10) {
                double p = pi10 / 100.0, lhs, rhs;
                bool ok = prw::binom_inverse_sqrt_check(n, p, &lhs, &rhs);
                row("binom", "n=" + std::to_string(n) + ";p=" + csv_escape_free(p), ok, lhs, rhs);
            }
    }
    ctx.write("lemmas.csv", csv);
    ctx.manifest["suite"] = suite;
    ctx.manifest["fails"] = fails;
    ctx.finish("check lemmas");
    if (fails > 0) {
        std::fprintf(stderr, "lemmas: %d cases failed\n", fails);
        return kExitError;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistent random walk toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // let subcommands pass --out up to the app
    RunContext ctx;
    app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();

    std::string model_path, params_path, seq_path, suite = "all";
    std::uint64_t horizon = 100000, trials = 1000, seed = 1, steps = 100000;
    std::int64_t n = 4096;
    int jobs = 1, grid = 256, K = 12, lmax = 8, mmax = 6, nmax = 200;
    double tolerance = 0.0;
    bool dichotomy = false, fourier = false;

    auto* sim = app.add_subcommand("simulate", "ensemble diagnostics");
    sim->add_option("--model", model_path)->required();
    sim->add_option("--horizon", horizon);
    sim->add_option("--trials", trials);
    sim->add_option("--seed", seed);
    sim->add_option("--jobs", jobs);
    sim->add_flag("--dichotomy", dichotomy, "also run the zero-one probe");

    auto* ske = app.add_subcommand("skeleton", "breaking-time skeleton of one path");
    ske->add_option("--model", model_path)->required();
    ske->add_option("--steps", steps);
    ske->add_option("--seed", seed);

    auto* cls = app.add_subcommand("classify", "series recurrence criterion");
    cls->add_option("--model", model_path)->required();
    cls->add_option("--n", n);
    cls->add_option("--tolerance", tolerance);

    auto* spc = app.add_subcommand("spectral", "perturbed-operator eigenvalue scan");
    spc->add_option("--model", model_path)->required();
    spc->add_option("--grid", grid);
    spc->add_flag("--fourier", fourier, "also run the integral criterion");

    auto* cex = app.add_subcommand("cex", "waiting-time counterexample tools");
    cex->require_subcommand(1);
    auto* cxb = cex->add_subcommand("build", "construct the sequence");
    cxb->add_option("--k", K);
    cxb->add_option("--params", params_path);
    auto* cxv = cex->add_subcommand("verify", "re-check every constraint");
    cxv->add_option("--sequence", seq_path)->required();
    auto* cxo = cex->add_subcommand("bounds", "upper/lower bound series");
    cxo->add_option("--sequence", seq_path)->required();
    auto* cxl = cex->add_subcommand("lemmas", "exact lemma sweeps");
    cxl->add_option("--suite", suite);
    cxl->add_option("--lmax", lmax);
    cxl->add_option("--mmax", mmax);
    cxl->add_option("--nmax", nmax);

    auto* chk = app.add_subcommand("check", "verification suites");
    chk->require_subcommand(1);
    auto* chl = chk->add_subcommand("lemmas", "exact lemma sweeps");
    chl->add_option("--suite", suite);
    chl->add_option("--lmax", lmax);
    chl->add_option("--mmax", mmax);
    chl->add_option("--nmax", nmax);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(ctx, model_path, horizon, trials, seed, jobs, dichotomy);
        if (ske->parsed()) return cmd_skeleton(ctx, model_path, steps, seed);
        if (cls->parsed()) return cmd_classify(ctx, model_path, n, tolerance);
        if (spc->parsed()) return cmd_spectral(ctx, model_path, grid, fourier);
        if (cex->parsed()) {
            if (cxb->parsed()) return cmd_cex_build(ctx, params_path, K);
            if (cxv->parsed()) return cmd_cex_verify(ctx, seq_path);
            if (cxo->parsed()) return cmd_cex_bounds(ctx, seq_path);
            if (cxl->parsed()) return run_lemmas(ctx, suite, lmax, mmax, nmax);
        }
        if (chk->parsed() && chl->parsed()) return run_lemmas(ctx, suite, lmax, mmax, nmax);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
