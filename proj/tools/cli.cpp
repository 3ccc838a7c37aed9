// Copyright 2026 The qsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qsep/correlation.hpp"
#include "qsep/errors.hpp"
#include "qsep/experiments.hpp"
#include "qsep/extraction.hpp"
#include "qsep/states.hpp"
#include "qsep/strategy.hpp"

namespace qsep::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::string_view kUsage =
    "usage: qsep <command> [options]\n"
    "\n"
    "commands:\n"
    "  build       emit an ideal (optionally perturbed or embedded) strategy as JSON\n"
    "  evaluate    strategy JSON -> correlation JSON or CSV\n"
    "  verify      correlation + Schmidt coefficients -> residual report\n"
    "  distance    two correlations -> correlation distance report\n"
    "  extract     strategy JSON -> extraction kit, residuals and extraction error\n"
    "  experiment  experiment config -> report\n"
    "\n"
    "common options: --seed <u64> --out <path> --format json|csv --max-dim <n>\n"
    "run `qsep <command> --help` for details\n";

const std::vector<std::string_view> kCommands = {"build", "evaluate", "verify", "distance", "extract", "experiment"};

struct Common {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string format = "json";
    std::size_t max_dim = ResourceLimits{}.max_dim;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_csv(const std::string &path, const std::string &text) {
    return fs::path(path).extension() == ".csv" || text.rfind("x,y,a,b,p", 0) == 0;
}

Correlation load_correlation(const std::string &path) {
    const std::string text = read_file(path);
    return looks_like_csv(path, text) ? correlation_from_csv(text) : correlation_from_json(text);
}

/// Accepts {"coefficients": [...]} (which includes strategy documents) or a bare array.
std::vector<double> load_coefficients(const std::string &path) {
    const std::string text = read_file(path);
    try {
        const json j = json::parse(text);
        if (j.is_array()) return j.get<std::vector<double>>();
        return j.at("coefficients").get<std::vector<double>>();
    } catch (const json::exception &e) {
        throw ValidationError("malformed state file '" + path + "': " + e.what());
    }
}

class Emitter {
   public:
    Emitter(const Common &common, std::string_view command, std::ostream &out, std::ostream &err)
        : common_(common), command_(command), out_(out), err_(err) {}

    /// Destination file, or empty for the output stream.
    std::string path(std::string_view ext) const {
        if (!common_.out.empty()) return common_.out;
        if (const char *dir = std::getenv("QSEP_OUT_DIR"); dir && *dir) {
            return (fs::path(dir) / (std::string(command_) + "." + std::string(ext))).string();
        }
        return {};
    }

    void write(const std::string &text, std::string_view ext) const {
        const std::string p = path(ext);
        if (p.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ValidationError("cannot write '" + p + "'");
        f << text;
        if (!f) throw ValidationError("failed writing '" + p + "'");
    }

    std::ostream &err() const {
        return err_;
    }

   private:
    const Common &common_;
    std::string_view command_;
    std::ostream &out_;
    std::ostream &err_;
};

struct Io {
    std::ostream &out;
    std::ostream &err;
};

/// Parses `args` (stored in reverse) into `app`. Returns an exit code when
/// parsing ends the command (help or a usage error).
std::optional<int> parse(CLI::App &app, const std::vector<std::string> &args, const Io &io) {
    try {
        app.parse(std::vector<std::string>(args));
    } catch (const CLI::CallForHelp &) {
        io.out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        io.err << app.get_name() << ": " << e.what() << "\n";
        return kExitValidation;
    }
    return std::nullopt;
}

void add_common(CLI::App &app, Common &c) {
    app.add_option("--seed", c.seed, "base seed for every random draw")->each([&c](const std::string &) {
        c.seed_set = true;
    });
    app.add_option("--out", c.out, "output file (default: stdout, or $QSEP_OUT_DIR/<command>.<ext>)");
    app.add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--max-dim", c.max_dim, "cap on the Hilbert-space dimension of one computation")
        ->check(CLI::PositiveNumber);
}

int run_build(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Emit a strategy as JSON", "qsep build"};
    Common local;
    add_common(app, local);
    std::string family = "many_answers";
    std::vector<double> coefficients;
    std::size_t truncation = 0;
    double theta = 0.0, eps = 0.0;
    std::size_t embed_levels = 0;
    app.add_option("--family", family, "generic|tilted_chsh|many_answers|many_questions");
    app.add_option("--coefficients", coefficients, "Schmidt coefficients, normalized on input")->delimiter(',');
    app.add_option("--truncation", truncation, "use the (i+1)^-8 truncation of this size");
    app.add_option("--theta", theta, "angle of the tilted CHSH state");
    app.add_option("--perturb", eps, "perturbation strength");
    app.add_option("--embed", embed_levels, "extra unpopulated levels per side");
    if (auto rc = parse(app, args, io)) return *rc;
    const Emitter emit(local, "build", io.out, io.err);

    const Family f = parse_family(family);
    Strategy s;
    if (f == Family::kTiltedChsh) {
        s = tilted_chsh_ideal(theta);
    } else if (truncation != 0) {
        s = truncated_separating_strategy(f, truncation);
    } else {
        if (coefficients.empty()) throw ValidationError("build: give --coefficients or --truncation");
        const SchmidtState state = make_state(coefficients);
        if (f == Family::kManyAnswers) {
            s = many_answers_ideal(state);
        } else if (f == Family::kManyQuestions) {
            s = many_questions_ideal(state);
        } else {
            throw ValidationError("build: family '" + family + "' has no ideal strategy");
        }
    }
    const ResourceLimits limits{local.max_dim};
    limits.check(s.dim_a() * s.dim_b(), "strategy");
    if (embed_levels != 0) {
        limits.check((s.dim_a() + embed_levels) * (s.dim_b() + embed_levels), "embedded strategy");
        s = embed(s, embed_levels, local.seed);
    }
    if (eps != 0.0) s = perturb(s, eps, local.seed);
    emit.write(strategy_to_json(s), "json");
    return kExitOk;
}

int run_evaluate(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Evaluate a strategy", "qsep evaluate"};
    Common local;
    add_common(app, local);
    std::string input;
    app.add_option("strategy", input, "strategy JSON")->required();
    if (auto rc = parse(app, args, io)) return *rc;
    const Emitter emit(local, "evaluate", io.out, io.err);
    const Strategy s = strategy_from_json(read_file(input));
    ResourceLimits{local.max_dim}.check(s.dim_a() * s.dim_b(), "strategy");
    const Correlation p = evaluate(s);
    if (local.format == "csv") {
        emit.write(correlation_to_csv(p), "csv");
    } else {
        emit.write(correlation_to_json(p), "json");
    }
    return kExitOk;
}

int run_verify(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Check a correlation against the ideal tables of a Schmidt state", "qsep verify"};
    Common local;
    add_common(app, local);
    std::string input, state_path, family;
    std::vector<double> coefficients;
    double tol = 1e-10;
    app.add_option("correlation", input, "correlation JSON or CSV")->required();
    auto *state_opt = app.add_option("--state", state_path, "JSON with a coefficients array");
    app.add_option("--coefficients", coefficients, "Schmidt coefficients")->delimiter(',')->excludes(state_opt);
    app.add_option("--family", family, "many_answers or many_questions (default: by parity of d)");
    app.add_option("--tol", tol, "residual tolerance");
    if (auto rc = parse(app, args, io)) return *rc;
    const Emitter emit(local, "verify", io.out, io.err);

    if (!state_path.empty()) coefficients = load_coefficients(state_path);
    if (coefficients.empty()) throw ValidationError("verify: give --state or --coefficients");
    const SchmidtState state = make_state(coefficients);
    const Family f = family.empty() ? (state.d() % 2 ? Family::kManyAnswers : Family::kManyQuestions)
                                    : parse_family(family);
    const Correlation p = load_correlation(input);
    VerifyReport r;
    if (f == Family::kManyAnswers) {
        r = verify_many_answers(p, state, tol);
    } else if (f == Family::kManyQuestions) {
        r = verify_many_questions(p, state, tol);
    } else {
        throw ValidationError("verify: family '" + family + "' has no ideal tables");
    }
    const json j{{"family", std::string(family_name(f))},
                 {"d", state.d()},
                 {"max_residual", r.max_residual},
                 {"location", r.location},
                 {"checks", r.checks},
                 {"tol", r.tol},
                 {"passed", r.passed()}};
    emit.write(j.dump(2) + "\n", "json");
    if (!r.passed()) {
        emit.err() << "verify: residual " << r.max_residual << " at " << r.location << " exceeds " << tol << "\n";
        return kExitValidation;
    }
    return kExitOk;
}

int run_distance(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Correlation distance sup_{x,y} Σ|p - q|", "qsep distance"};
    Common local;
    add_common(app, local);
    std::string first, second;
    app.add_option("p", first, "first correlation")->required();
    app.add_option("q", second, "second correlation")->required();
    if (auto rc = parse(app, args, io)) return *rc;
    const Emitter emit(local, "distance", io.out, io.err);
    const DistanceReport r = distance(load_correlation(first), load_correlation(second));
    json per_pair = r.per_pair;
    const json j{{"distance", r.value},
                 {"argmax_x", r.argmax_x.label()},
                 {"argmax_y", r.argmax_y.label()},
                 {"per_pair", per_pair}};
    emit.write(j.dump(2) + "\n", "json");
    return kExitOk;
}

int run_extract(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Build the extraction kit and apply the swap isometry", "qsep extract"};
    Common local;
    add_common(app, local);
    std::string input, family;
    bool with_kit = false;
    app.add_option("strategy", input, "strategy JSON")->required();
    app.add_option("--family", family, "question labels to read (default: the strategy's family)");
    app.add_flag("--kit", with_kit, "include the kit operators in the report");
    if (auto rc = parse(app, args, io)) return *rc;
    const Emitter emit(local, "extract", io.out, io.err);

    const Strategy s = strategy_from_json(read_file(input));
    if (s.target.empty()) throw ValidationError("extract: strategy has no target coefficients");
    const Family f = family.empty() ? s.family : parse_family(family);
    const SchmidtState state = make_state(s.target);
    const ExtractionKit kit = build_kit(s, f, state);
    const ResidualReport yn = yn_residuals(kit, s.state, state);
    const SwapResult swap = swap_isometry(kit, s.state, state, ResourceLimits{local.max_dim});
    json j{{"family", std::string(family_name(f))},
           {"d", kit.d},
           {"yn", yn.eps},
           {"yn_overall", yn.overall},
           {"extraction_error", swap.error},
           {"output_norm", swap.output_norm}};
    if (with_kit) j["kit"] = json::parse(kit_to_json(kit));
    emit.write(j.dump(2) + "\n", "json");
    return kExitOk;
}

int run_experiment_command(const std::vector<std::string> &args, const Io &io) {
    CLI::App app{"Run an experiment described by a JSON config", "qsep experiment"};
    Common local;
    add_common(app, local);
    std::string positional, flag_config;
    app.add_option("config_file", positional, "experiment config JSON");
    app.add_option("--config", flag_config, "experiment config JSON");
    if (auto rc = parse(app, args, io)) return *rc;
    const std::string path = flag_config.empty() ? positional : flag_config;
    if (path.empty()) throw ValidationError("experiment: no config given");

    ExperimentConfig cfg = config_from_json(read_file(path));
    if (local.seed_set) cfg.seed = local.seed;
    if (local.max_dim != ResourceLimits{}.max_dim) cfg.max_dim = local.max_dim;
    const ExperimentReport report = run_experiment(cfg);
    const bool csv = local.format == "csv";
    const std::string text = csv ? report_to_csv(report) : report_to_json(report);

    Common routed = local;
    if (routed.out.empty()) routed.out = cfg.output;
    const Emitter emit(routed, "experiment", io.out, io.err);
    const std::string ext = csv ? "csv" : "json";
    const std::string dest = emit.path(ext);
    if (!dest.empty() && fs::exists(dest)) {
        if (auto warning = hash_mismatch(read_file(dest), report)) io.err << "warning: " << *warning << "\n";
    }
    emit.write(text, ext);
    if (!report.passed()) {
        io.err << "experiment " << cfg.experiment << ": checks failed (see report)\n";
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace

int dispatch(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    if (argc < 2) {
        err << kUsage;
        return kExitUsage;
    }
    const std::string_view command = argv[1];
    if (command == "-h" || command == "--help" || command == "help") {
        out << kUsage;
        return kExitOk;
    }
    if (command == "--version") {
        out << "qsep " << version() << "\n";
        return kExitOk;
    }
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end()) {
        err << "qsep: unknown command '" << command << "'\n\n" << kUsage;
        return kExitUsage;
    }
    std::vector<std::string> args;
    for (int i = argc - 1; i >= 2; --i) args.emplace_back(argv[i]);

    const Io io{out, err};
    try {
        if (command == "build") return run_build(args, io);
        if (command == "evaluate") return run_evaluate(args, io);
        if (command == "verify") return run_verify(args, io);
        if (command == "distance") return run_distance(args, io);
        if (command == "extract") return run_extract(args, io);
        return run_experiment_command(args, io);
    } catch (const ResourceError &e) {
        err << "qsep " << command << ": resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const Error &e) {
        err << "qsep " << command << ": " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception &e) {
        err << "qsep " << command << ": internal error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace qsep::cli
