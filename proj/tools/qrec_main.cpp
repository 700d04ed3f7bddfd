// Command-line driver: dataset recovery, subject screening, synthetic
// data generation, corruption, and the seeded experiment runner.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrec/baselines.hpp"
#include "qrec/errors.hpp"
#include "qrec/harness.hpp"
#include "qrec/io.hpp"
#include "qrec/rng.hpp"
#include "qrec/solver.hpp"
#include "qrec/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;       // parse or invariant error
constexpr int kExitNumerical = 3;   // degenerate variance, zero variance, ...
constexpr int kExitNotConverged = 4;

struct SolverFlags {
    double alpha = 0.1;
    double stop_threshold = 1e-9;
    std::size_t max_iterations = 10000;
    std::string gauge = "zero-mean-bias";

    void attach(CLI::App& cmd) {
        cmd.add_option("--alpha", alpha, "Refresh rate of the damped updates")
            ->capture_default_str();
        cmd.add_option("--stop-threshold", stop_threshold,
                       "Euclidean threshold on the per-iteration change in x")
            ->capture_default_str();
        cmd.add_option("--max-iter", max_iterations, "Iteration cap")->capture_default_str();
        cmd.add_option("--gauge", gauge, "zero-mean-bias|fix-first-video|none")
            ->capture_default_str();
    }

    qrec::SolverConfig config() const {
        qrec::SolverConfig cfg;
        cfg.alpha = alpha;
        cfg.stop_threshold = stop_threshold;
        cfg.max_iterations = max_iterations;
        const auto mode = qrec::parse_gauge(gauge);
        if (!mode) throw qrec::InvariantViolation("unknown gauge mode '" + gauge + "'");
        cfg.gauge = *mode;
        cfg.validate();
        return cfg;
    }
};

qrec::MethodId parse_method_or_throw(const std::string& name) {
    const auto method = qrec::parse_method(name);
    if (!method) throw qrec::InvariantViolation("unknown method '" + name + "'");
    return *method;
}

qrec::ModelParams load_params_file(const std::filesystem::path& path, std::size_t videos,
                                   std::size_t subjects, std::size_t contents) {
    std::ifstream in(path);
    if (!in) throw qrec::IoError("cannot open " + path.string());
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw qrec::ParseError(0, "json", e.what());
    }
    qrec::ModelParams params;
    try {
        params.x = root.at("x").get<std::vector<double>>();
        params.b = root.at("b").get<std::vector<double>>();
        params.v = root.at("v").get<std::vector<double>>();
        params.a = root.at("a").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw qrec::ParseError(0, "params", e.what());
    }
    if (params.x.size() != videos || params.b.size() != subjects ||
        params.v.size() != subjects || params.a.size() != contents) {
        throw qrec::InvariantViolation("parameter file shapes do not match --videos/--subjects/--contents");
    }
    return params;
}

/// Default true parameters for `synth` when no --params file is given:
/// x in [1,5], b in [-1,1], v in [0.2,1.0], a in [0.1,0.8], drawn from
/// the given seed.
qrec::ModelParams draw_default_params(std::size_t videos, std::size_t subjects,
                                      std::size_t contents, std::uint64_t seed) {
    qrec::SplitMix64 rng(seed);
    qrec::ModelParams params;
    params.x.resize(videos);
    params.b.resize(subjects);
    params.v.resize(subjects);
    params.a.resize(contents);
    for (double& value : params.x) value = 1.0 + 4.0 * rng.next_unit();
    for (double& value : params.b) value = -1.0 + 2.0 * rng.next_unit();
    for (double& value : params.v) value = 0.2 + 0.8 * rng.next_unit();
    for (double& value : params.a) value = 0.1 + 0.7 * rng.next_unit();
    return params;
}

int run(int argc, char** argv) {
    CLI::App app{"Recover subjective quality scores from raw opinion score matrices"};
    app.require_subcommand(1);

    // recover
    auto* recover_cmd = app.add_subcommand(
        "recover", "Recover per-video quality scores with one method");
    std::string recover_dataset, recover_method, recover_out;
    bool require_convergence = false;
    SolverFlags recover_flags;
    recover_cmd->add_option("dataset", recover_dataset, "Dataset file (.csv or .json)")
        ->required();
    recover_cmd->add_option("--method", recover_method, "mos|sr-mos|zs-sr-mos|mle")->required();
    recover_cmd->add_option("--out", recover_out, "Results file (JSON)")->required();
    recover_cmd->add_flag("--require-convergence", require_convergence,
                          "Exit with status 4 when the MLE solve does not converge");
    recover_flags.attach(*recover_cmd);

    // reject
    auto* reject_cmd =
        app.add_subcommand("reject", "Screen subjects with the BT.500-style rejection rule");
    std::string reject_dataset, reject_out;
    reject_cmd->add_option("dataset", reject_dataset, "Dataset file")->required();
    reject_cmd->add_option("--out", reject_out, "Rejection report (JSON)")->required();

    // synth
    auto* synth_cmd = app.add_subcommand(
        "synth",
        "Generate a synthetic dataset from the generative model. Without --params, "
        "true parameters are drawn from --seed and the score noise from --seed + 1.");
    std::size_t synth_subjects = 0, synth_videos = 0, synth_contents = 0;
    std::uint64_t synth_seed = 0;
    std::string synth_params, synth_out;
    synth_cmd->add_option("--subjects", synth_subjects, "Subject count S")->required();
    synth_cmd->add_option("--videos", synth_videos, "Video count E")->required();
    synth_cmd->add_option("--contents", synth_contents, "Content count C")->required();
    synth_cmd->add_option("--seed", synth_seed, "Seed (required; no wall-clock default)")
        ->required();
    synth_cmd->add_option("--params", synth_params,
                          "JSON file with true parameters {x, b, v, a}");
    synth_cmd->add_option("--out", synth_out, "Dataset file to write (.csv or .json)")
        ->required();

    // corrupt
    auto* corrupt_cmd = app.add_subcommand("corrupt", "Corrupt a dataset");
    std::string corrupt_dataset, corrupt_mode, corrupt_out;
    std::size_t corrupt_count = 0;
    double corrupt_prob = 0.0;
    std::uint64_t corrupt_seed = 0;
    corrupt_cmd->add_option("dataset", corrupt_dataset, "Dataset file")->required();
    corrupt_cmd->add_option("--mode", corrupt_mode, "subjects|random")->required();
    auto* count_opt = corrupt_cmd->add_option(
        "--count", corrupt_count, "Number of subjects to scramble (mode subjects)");
    auto* prob_opt = corrupt_cmd->add_option(
        "--prob", corrupt_prob, "Replacement probability (mode random)");
    corrupt_cmd->add_option("--seed", corrupt_seed, "Seed")->required();
    corrupt_cmd->add_option("--out", corrupt_out, "Dataset file to write")->required();

    // experiment
    auto* experiment_cmd = app.add_subcommand(
        "experiment", "Run a seeded degradation experiment and export plot data");
    std::string experiment_dataset, experiment_kind, experiment_out;
    std::vector<std::string> experiment_methods;
    std::vector<double> experiment_conditions;
    int experiment_reps = 100;
    std::uint64_t experiment_seed = 0;
    SolverFlags experiment_flags;
    experiment_cmd->add_option("dataset", experiment_dataset, "Dataset file")->required();
    experiment_cmd
        ->add_option("--kind", experiment_kind,
                     "convergence|subject-corruption|random-corruption|selective-sampling")
        ->required();
    experiment_cmd
        ->add_option("--methods", experiment_methods, "Comma-separated list of methods")
        ->required()
        ->delimiter(',');
    experiment_cmd->add_option(
        "--conditions", experiment_conditions,
        "Condition axis (subject counts, corrupt counts, probabilities or keep "
        "probabilities; per-kind defaults otherwise)")
        ->delimiter(',');
    experiment_cmd->add_option("--reps", experiment_reps, "Seeded repetitions per condition")
        ->capture_default_str();
    experiment_cmd->add_option("--seed", experiment_seed, "Base seed (repetition r uses seed + r)")
        ->required();
    experiment_cmd->add_option("--out", experiment_out, "Plot-data CSV to write")->required();
    experiment_flags.attach(*experiment_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    if (recover_cmd->parsed()) {
        const qrec::ScoreMatrix m = qrec::load_dataset(recover_dataset);
        const qrec::MethodId method = parse_method_or_throw(recover_method);
        const qrec::SolverConfig cfg = recover_flags.config();
        const qrec::RecoveryResult result = qrec::run_recovery(m, method, cfg);
        qrec::save_results(result, recover_out);
        if (require_convergence && result.mle && !result.mle->converged) {
            std::cerr << "solve did not converge within " << cfg.max_iterations
                      << " iterations (final delta x " << result.mle->final_delta_x << ")\n";
            return kExitNotConverged;
        }
        return kExitOk;
    }

    if (reject_cmd->parsed()) {
        const qrec::ScoreMatrix m = qrec::load_dataset(reject_dataset);
        qrec::save_rejection(qrec::subject_rejection(m), m, reject_out);
        return kExitOk;
    }

    if (synth_cmd->parsed()) {
        qrec::GeneratorSpec spec;
        spec.videos = synth_videos;
        spec.subjects = synth_subjects;
        spec.contents = synth_contents;
        if (synth_params.empty()) {
            spec.true_params =
                draw_default_params(synth_videos, synth_subjects, synth_contents, synth_seed);
            spec.seed = synth_seed + 1;
        } else {
            spec.true_params =
                load_params_file(synth_params, synth_videos, synth_subjects, synth_contents);
            spec.seed = synth_seed;
        }
        qrec::save_dataset(qrec::generate(spec), synth_out);
        return kExitOk;
    }

    if (corrupt_cmd->parsed()) {
        const qrec::ScoreMatrix m = qrec::load_dataset(corrupt_dataset);
        if (corrupt_mode == "subjects") {
            if (count_opt->count() == 0) {
                throw qrec::InvariantViolation("--mode subjects needs --count");
            }
            qrec::save_dataset(qrec::scramble_random_subjects(m, corrupt_count, corrupt_seed),
                               corrupt_out);
        } else if (corrupt_mode == "random") {
            if (prob_opt->count() == 0) {
                throw qrec::InvariantViolation("--mode random needs --prob");
            }
            qrec::save_dataset(qrec::corrupt_random(m, corrupt_prob, corrupt_seed), corrupt_out);
        } else {
            throw qrec::InvariantViolation("unknown corruption mode '" + corrupt_mode + "'");
        }
        return kExitOk;
    }

    // experiment
    const qrec::ScoreMatrix m = qrec::load_dataset(experiment_dataset);
    const qrec::SolverConfig cfg = experiment_flags.config();
    std::vector<qrec::MethodId> methods;
    for (const std::string& name : experiment_methods) {
        methods.push_back(parse_method_or_throw(name));
    }

    const std::size_t S = m.subject_count();
    std::vector<qrec::ExperimentReport> reports;
    if (experiment_kind == "convergence") {
        std::vector<std::size_t> counts;
        if (experiment_conditions.empty()) {
            for (const std::size_t count : {S / 4, S / 2, (3 * S) / 4, S}) {
                if (count >= 1 && (counts.empty() || counts.back() != count)) {
                    counts.push_back(count);
                }
            }
        } else {
            for (const double value : experiment_conditions) {
                counts.push_back(static_cast<std::size_t>(value));
            }
        }
        reports = qrec::run_convergence(m, methods, counts, experiment_reps, experiment_seed, cfg);
    } else if (experiment_kind == "subject-corruption") {
        std::vector<std::size_t> counts;
        if (experiment_conditions.empty()) {
            for (std::size_t count = 0; count <= std::min<std::size_t>(5, S); ++count) {
                counts.push_back(count);
            }
        } else {
            for (const double value : experiment_conditions) {
                counts.push_back(static_cast<std::size_t>(value));
            }
        }
        reports = qrec::run_subject_corruption(m, methods, counts, experiment_reps,
                                               experiment_seed, cfg);
    } else if (experiment_kind == "random-corruption") {
        std::vector<double> probs = experiment_conditions.empty()
                                        ? std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5}
                                        : experiment_conditions;
        reports = qrec::run_random_corruption(m, methods, probs, experiment_reps,
                                              experiment_seed, cfg);
    } else if (experiment_kind == "selective-sampling") {
        std::vector<double> keep = experiment_conditions.empty()
                                       ? std::vector<double>{0.3, 0.5, 0.7, 1.0}
                                       : experiment_conditions;
        reports = qrec::run_selective_sampling(m, methods, keep, experiment_reps,
                                               experiment_seed, cfg);
    } else {
        throw qrec::InvariantViolation("unknown experiment kind '" + experiment_kind + "'");
    }
    qrec::export_plot_data(reports, experiment_out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qrec::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qrec::InvariantViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qrec::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qrec::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
