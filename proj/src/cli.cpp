#include "trajex/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "trajex/explore.hpp"
#include "trajex/parser.hpp"
#include "trajex/pc_model.hpp"
#include "trajex/printer.hpp"
#include "trajex/report_io.hpp"
#include "trajex/specialize.hpp"
#include "trajex/validate.hpp"

namespace trajex {

namespace {

using json = nlohmann::json;

bool writeFile(const std::string &path, const std::string &content, std::ostream &err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write '" << path << "'\n";
        return false;
    }
    f << content;
    return true;
}

std::optional<std::string> readFile(const std::string &path, std::ostream &err) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot read '" << path << "'\n";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

std::optional<Program> loadModel(const std::string &path, std::ostream &err) {
    auto text = readFile(path, err);
    if (!text) {
        return std::nullopt;
    }
    Program prog;
    try {
        prog = parseProgram(*text);
    } catch (const ParseError &e) {
        err << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
    ValidationReport report = validate(prog);
    if (!report.ok()) {
        err << path << ": validation failed\n" << report.summary();
        return std::nullopt;
    }
    return prog;
}

std::optional<std::vector<SplitDirective>> loadDirectives(const std::string &path,
                                                          std::ostream &err) {
    auto text = readFile(path, err);
    if (!text) {
        return std::nullopt;
    }
    std::vector<SplitDirective> out;
    try {
        json j = json::parse(*text);
        for (auto it = j.begin(); it != j.end(); ++it) {
            SplitDirective d;
            d.ruleId = it.key();
            for (const auto &dim : it.value()) {
                d.dims.push_back(dim.get<std::string>());
            }
            out.push_back(std::move(d));
        }
    } catch (const json::exception &e) {
        err << path << ": " << e.what() << "\n";
        return std::nullopt;
    }
    return out;
}

Rational parseRationalArg(const std::string &text) {
    auto r = Rational::parse(text);
    if (!r) {
        throw CLI::ValidationError("'" + text + "' is not a rational (use n or n/d)");
    }
    return *r;
}

/// Unfolds a fact of a possibly specialized program back to display form.
struct DisplayFact {
    int sti;
    std::string text;
};

DisplayFact displayFact(const Program &prog, PredId pred, int sti, const FactArgs &args) {
    const PredDecl &decl = prog.preds[pred];
    std::string name = decl.name;
    int shownSti = decl.timeIndexed ? sti : 0;
    bool timeIndexed = decl.timeIndexed;
    if (auto folded = parseFoldedName(decl.name)) {
        name = folded->first;
        shownSti = folded->second;
        timeIndexed = true;
    }
    std::string s = name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        s += (i ? ", " : "") + prog.groundToString(args[i]);
    }
    if (timeIndexed) {
        if (!args.empty()) {
            s += ", ";
        }
        s += std::to_string(shownSti);
    }
    return DisplayFact{shownSti, s + ")"};
}

// ---- subcommand payloads --------------------------------------------------

struct PcModelArgs {
    int producers = 3;
    int consumers = 3;
    int horizon = 7;
    std::string gamma = "3/8";
    std::string prices;
    std::string demand = "1";
    std::string production = "2";
    std::string level = "2";
    int choiceTransitions = 5;
    std::string output;
};

int cmdPcModel(const PcModelArgs &a, std::ostream &out, std::ostream &err) {
    pc::PcParams params;
    params.producers = a.producers;
    params.consumers = a.consumers;
    params.horizon = a.horizon;
    params.choiceTransitions = a.choiceTransitions;
    try {
        params.gamma = parseRationalArg(a.gamma);
        params.baseDemand = parseRationalArg(a.demand);
        params.productionPerDay = parseRationalArg(a.production);
        params.initialLevel = parseRationalArg(a.level);
        if (!a.prices.empty()) {
            std::stringstream ss(a.prices);
            std::string item;
            while (std::getline(ss, item, ',')) {
                params.initialPrices.push_back(parseRationalArg(item));
            }
        }
        pc::PcModel model = pc::buildModel(params);
        if (a.output.empty()) {
            out << model.text;
        } else if (!writeFile(a.output, model.text, err)) {
            return 1;
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct CompileArgs {
    std::string model;
    std::string output;
    std::string sidecar;
    std::string directives;
};

int cmdCompile(const CompileArgs &a, std::ostream &out, std::ostream &err) {
    auto prog = loadModel(a.model, err);
    if (!prog) {
        return 1;
    }
    std::vector<SplitDirective> overrides;
    if (!a.directives.empty()) {
        auto loaded = loadDirectives(a.directives, err);
        if (!loaded) {
            return 1;
        }
        overrides = *loaded;
    }
    try {
        buildPartitions(*prog); // stratification gate before any compilation
        SpecializedProgram spec = specialize(*prog, overrides);
        buildPartitions(spec.program);
        std::string text = formatProgram(spec.program);
        if (!a.output.empty()) {
            if (!writeFile(a.output, text, err)) {
                return 1;
            }
        }
        auto predictions = predictCost(*prog, overrides);

        out << std::left << std::setw(24) << "rule" << std::right << std::setw(8) << "before"
            << "  " << std::left << std::setw(30) << "split by" << std::right << std::setw(8)
            << "after" << "\n";
        for (std::size_t r = 0; r < prog->rules.size(); ++r) {
            const std::string &id = prog->rules[r].id;
            std::string dims;
            for (std::size_t i = 0; i < spec.applied[r].dims.size(); ++i) {
                dims += (i ? ", " : "") + spec.applied[r].dims[i];
            }
            if (dims.empty()) {
                dims = "-";
            }
            out << std::left << std::setw(24) << id << std::right << std::setw(8) << 1 << "  "
                << std::left << std::setw(30) << dims << std::right << std::setw(8)
                << spec.splitCountByOrigin.at(id) << "\n";
        }
        out << std::left << std::setw(24) << "transition rules" << std::right << std::setw(8)
            << spec.transitionRulesBefore << "  " << std::left << std::setw(30) << "" << std::right
            << std::setw(8) << spec.transitionRulesAfter << "\n";

        if (!a.sidecar.empty()) {
            json j;
            j["schema"] = 1;
            json dirs;
            json counts;
            json factors;
            for (std::size_t r = 0; r < prog->rules.size(); ++r) {
                const std::string &id = prog->rules[r].id;
                dirs[id] = spec.applied[r].dims;
                json c;
                c["before"] = 1;
                c["after"] = spec.splitCountByOrigin.at(id);
                counts[id] = std::move(c);
                factors[predictions[r].ruleId] = predictions[r].factor;
            }
            j["directives"] = std::move(dirs);
            j["ruleCounts"] = std::move(counts);
            j["predictedFactors"] = std::move(factors);
            json totals;
            totals["transitionRulesBefore"] = spec.transitionRulesBefore;
            totals["transitionRulesAfter"] = spec.transitionRulesAfter;
            totals["rulesAfter"] = spec.program.rules.size();
            j["totals"] = std::move(totals);
            if (!writeFile(a.sidecar, j.dump(2) + "\n", err)) {
                return 1;
            }
        }
    } catch (const StratificationError &e) {
        err << "stratification error: " << e.what() << "\n";
        return 1;
    } catch (const SpecializeError &e) {
        err << "specialization error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct ExploreArgs {
    std::string model;
    std::string mode = "prove";
    std::string theorem;
    bool negate = false;
    bool generic = false;
    int jobs = 1;
    std::string jsonPath;
    std::string csvPath;
    bool fullMap = false;
    bool instrument = false;
    bool timings = false;
};

int cmdExplore(const ExploreArgs &a, std::ostream &out, std::ostream &err) {
    auto prog = loadModel(a.model, err);
    if (!prog) {
        return 1;
    }
    ExploreOptions opts;
    if (a.mode == "prove") {
        opts.mode = ExploreMode::Prove;
    } else if (a.mode == "refute") {
        opts.mode = ExploreMode::Refute;
    } else if (a.mode == "survey") {
        opts.mode = ExploreMode::Survey;
    } else {
        err << "error: unknown mode '" << a.mode << "'\n";
        return 1;
    }
    opts.theoremName = a.theorem;
    opts.negateTheorem = a.negate;
    opts.jobs = a.jobs;
    opts.collectMap = a.fullMap;
    opts.instrument = a.instrument;

    ExplorationReport report;
    try {
        if (a.generic) {
            report = explore(*prog, nullptr, opts);
        } else {
            SpecializedProgram spec = specialize(*prog);
            report = explore(*prog, &spec, opts);
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    ReportRenderOptions render;
    render.includeWallTime = a.timings;
    render.includeScanCounts = a.instrument;
    std::string jsonText = reportToJson(report, render);
    if (!a.jsonPath.empty() && !writeFile(a.jsonPath, jsonText, err)) {
        return 1;
    }
    if (!a.csvPath.empty() && !writeFile(a.csvPath, reportToCsv(report), err)) {
        return 1;
    }

    out << "verdict: " << report.verdict << "\n";
    out << "completed: " << report.completed << "  pruned: " << report.pruned
        << "  aborted: " << report.aborted << "\n";
    if (!report.theorem.empty()) {
        out << "theorem: " << report.theorem << (report.negated ? " (negated)" : "") << "\n";
    }
    if (report.counterexample) {
        out << "counterexample: " << report.counterexample->label << "\n";
    }
    if (!report.valid) {
        err << "error: " << report.error << "\n";
    }
    if (a.timings) {
        out << "wall seconds: " << report.wallSeconds << "\n";
    }
    return report.exitCode();
}

struct TraceArgs {
    std::string model;
    std::string label;
    bool generic = false;
    bool fired = false;
};

int cmdTrace(const TraceArgs &a, std::ostream &out, std::ostream &err) {
    auto prog = loadModel(a.model, err);
    if (!prog) {
        return 1;
    }
    try {
        std::vector<std::uint32_t> picks = parseLabelIndices(a.label);
        std::optional<SpecializedProgram> spec;
        if (!a.generic) {
            spec = specialize(*prog);
        }
        std::vector<std::string> firedLines;
        TraceSink sink;
        const Program &runtime = spec ? spec->program : *prog;
        if (a.fired) {
            sink = [&](const TraceEvent &e) {
                firedLines.push_back("STI " + std::to_string(e.sweep) + " " + e.ruleId + " " +
                                     displayFact(runtime, e.pred, e.factSti, e.args).text);
            };
        }

        std::map<int, std::vector<std::string>> factsBySti;
        std::string diagnostic;
        LeafVisitor hook = [&](const LeafInfo &leaf) {
            diagnostic = leaf.diagnostic;
            for (PredId p = 0; p < runtime.preds.size(); ++p) {
                for (const auto &[sti, facts] : leaf.db.extension(p)) {
                    for (const auto &fact : facts) {
                        DisplayFact d = displayFact(runtime, p, sti, fact);
                        factsBySti[d.sti].push_back(d.text);
                    }
                }
            }
        };
        LeafRecord record = replayRecord(*prog, spec ? &*spec : nullptr, picks, nullptr, sink, hook);

        out << "label: " << (record.label.empty() ? "(no choices)" : record.label) << "\n";
        out << "status: " << leafStatusName(record.status) << "\n";
        if (record.status == LeafStatus::Pruned) {
            out << "pruned by: " << diagnostic << "\n";
        } else if (record.status == LeafStatus::Aborted) {
            out << "aborted: " << diagnostic << "\n";
        }
        for (auto &[sti, lines] : factsBySti) {
            std::sort(lines.begin(), lines.end());
            out << "STI " << sti << ":\n";
            for (const auto &line : lines) {
                out << "  " << line << "\n";
            }
            if (record.status == LeafStatus::Completed && sti >= 1) {
                for (std::size_t o = 0; o < prog->observables.size(); ++o) {
                    if (sti <= static_cast<int>(record.values[o].size())) {
                        out << "  " << prog->observables[o].name << " = "
                            << record.values[o][sti - 1].toString() << "\n";
                    }
                }
            }
        }
        if (a.fired) {
            out << "fired rules:\n";
            for (const auto &line : firedLines) {
                out << "  " << line << "\n";
            }
        }
    } catch (const LabelError &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

struct BenchArgs {
    std::string model;
    int jobs = 1;
    std::string jsonPath;
};

std::vector<std::uint32_t> leftmostPicks(const Program &prog, const PartitionPlan &plan) {
    std::vector<std::uint32_t> picks;
    for (;;) {
        ProbeResult probe = probeChoicePoint(prog, plan, picks);
        if (probe.isLeaf) {
            return picks;
        }
        picks.push_back(0);
    }
}

int cmdBench(const BenchArgs &a, std::ostream &out, std::ostream &err) {
    auto prog = loadModel(a.model, err);
    if (!prog) {
        return 1;
    }
    try {
        SpecializedProgram spec = specialize(*prog);
        ExploreOptions opts;
        opts.mode = prog->theorems.empty() ? ExploreMode::Survey : ExploreMode::Prove;
        opts.jobs = 1;

        auto t0 = std::chrono::steady_clock::now();
        ExplorationReport genericReport = explore(*prog, nullptr, opts);
        auto t1 = std::chrono::steady_clock::now();
        ExplorationReport splitReport = explore(*prog, &spec, opts);
        auto t2 = std::chrono::steady_clock::now();

        double wallGeneric = std::chrono::duration<double>(t1 - t0).count();
        double wallSplit = std::chrono::duration<double>(t2 - t1).count();

        double wallParallel = 0.0;
        if (a.jobs > 1) {
            ExploreOptions par = opts;
            par.jobs = a.jobs;
            auto t3 = std::chrono::steady_clock::now();
            explore(*prog, &spec, par);
            wallParallel = std::chrono::duration<double>(std::chrono::steady_clock::now() - t3)
                               .count();
        }

        bool reportsMatch = reportToJson(genericReport) == reportToJson(splitReport);

        // Scan curves from an instrumented replay of the leftmost trajectory.
        PartitionPlan genericPlan = buildPartitions(*prog);
        std::vector<std::uint32_t> picks = leftmostPicks(*prog, genericPlan);
        RunStats genericStats;
        RunStats splitStats;
        replayRecord(*prog, nullptr, picks, &genericStats);
        replayRecord(*prog, &spec, picks, &splitStats);

        json curves;
        json growth;
        json flat;
        for (const auto &rule : prog->rules) {
            if (!rule.timeVar) {
                continue;
            }
            json g = json::array();
            json s = json::array();
            bool strictlyGrowing = true;
            bool isFlat = true;
            std::uint64_t prevG = 0;
            std::uint64_t firstS = 0;
            bool haveFirstS = false;
            for (int t = 1; t <= prog->horizon; ++t) {
                auto git = genericStats.scans.find({rule.id, t});
                std::uint64_t gv = git == genericStats.scans.end() ? 0 : git->second;
                g.push_back(gv);
                if (t > 1 && gv <= prevG) {
                    strictlyGrowing = false;
                }
                prevG = gv;
                auto sit = splitStats.scans.find({rule.id, t});
                if (sit != splitStats.scans.end()) {
                    s.push_back(sit->second);
                    if (!haveFirstS) {
                        firstS = sit->second;
                        haveFirstS = true;
                    } else if (sit->second != firstS) {
                        isFlat = false;
                    }
                }
            }
            json entry;
            entry["generic"] = std::move(g);
            entry["split"] = std::move(s);
            curves[rule.id] = std::move(entry);
            growth[rule.id] = strictlyGrowing;
            flat[rule.id] = isFlat;
        }

        json j;
        j["schema"] = 1;
        j["wallGenericSeconds"] = wallGeneric;
        j["wallSplitSeconds"] = wallSplit;
        if (a.jobs > 1) {
            j["wallSplitParallelSeconds"] = wallParallel;
            j["parallelJobs"] = a.jobs;
        }
        j["speedup"] = wallSplit > 0 ? wallGeneric / wallSplit : 0.0;
        j["reportsMatch"] = reportsMatch;
        j["verdict"] = splitReport.verdict;
        j["completed"] = splitReport.completed;
        j["scanCurves"] = std::move(curves);
        j["genericScansStrictlyGrowing"] = std::move(growth);
        j["splitScansFlat"] = std::move(flat);
        if (!a.jsonPath.empty() && !writeFile(a.jsonPath, j.dump(2) + "\n", err)) {
            return 1;
        }

        out << "generic: " << std::fixed << std::setprecision(3) << wallGeneric << " s\n";
        out << "split:   " << wallSplit << " s\n";
        if (a.jobs > 1) {
            out << "split (jobs=" << a.jobs << "): " << wallParallel << " s\n";
        }
        out << "speedup: " << std::setprecision(2) << (wallSplit > 0 ? wallGeneric / wallSplit : 0)
            << "x\n";
        out << "reports match: " << (reportsMatch ? "yes" : "NO") << "\n";
        if (!reportsMatch) {
            err << "error: generic and specialized explorations disagree\n";
            return 1;
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int runCli(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"constrained trajectory-space explorer for declarative rule models"};
    app.require_subcommand(1);

    PcModelArgs pcArgs;
    CLI::App *pcCmd = app.add_subcommand("pc-model", "generate the producer-consumer market model");
    pcCmd->add_option("--producers", pcArgs.producers, "number of producers");
    pcCmd->add_option("--consumers", pcArgs.consumers, "number of consumers");
    pcCmd->add_option("--horizon", pcArgs.horizon, "number of STIs");
    pcCmd->add_option("--gamma", pcArgs.gamma, "price adjustment gain (rational in (0,1))");
    pcCmd->add_option("--prices", pcArgs.prices, "comma-separated initial prices");
    pcCmd->add_option("--demand", pcArgs.demand, "base demand per consumer per day");
    pcCmd->add_option("--production", pcArgs.production, "production per producer per day");
    pcCmd->add_option("--level", pcArgs.level, "initial warehouse level");
    pcCmd->add_option("--choice-transitions", pcArgs.choiceTransitions,
                      "number of leading transitions with free producer choices");
    pcCmd->add_option("-o,--output", pcArgs.output, "output .rules file (default: stdout)");

    CompileArgs compileArgs;
    CLI::App *compileCmd =
        app.add_subcommand("compile", "specialize a model by time and agent instances");
    compileCmd->add_option("-m,--model", compileArgs.model, "model .rules file")->required();
    compileCmd->add_option("-o,--output", compileArgs.output, "specialized .rules output");
    compileCmd->add_option("--sidecar", compileArgs.sidecar, "JSON sidecar with rule counts");
    compileCmd->add_option("--directives", compileArgs.directives,
                           "JSON file overriding split directives per rule");

    ExploreArgs exploreArgs;
    CLI::App *exploreCmd =
        app.add_subcommand("explore", "exhaustively explore trajectories and check a tendency");
    exploreCmd->add_option("-m,--model", exploreArgs.model, "model .rules file")->required();
    exploreCmd->add_option("--mode", exploreArgs.mode, "prove | refute | survey");
    exploreCmd->add_option("--theorem", exploreArgs.theorem, "theorem name (default: first declared)");
    exploreCmd->add_flag("--negate", exploreArgs.negate, "negate the theorem");
    exploreCmd->add_flag("--generic", exploreArgs.generic, "run the generic rules (no specialization)");
    exploreCmd->add_option("-j,--jobs", exploreArgs.jobs, "parallel subtree workers");
    exploreCmd->add_option("--json", exploreArgs.jsonPath, "write the JSON report here");
    exploreCmd->add_option("--csv", exploreArgs.csvPath, "write the envelope CSV here");
    exploreCmd->add_flag("--full-map", exploreArgs.fullMap,
                         "include every trajectory's observable sequence in the report");
    exploreCmd->add_flag("--instrument", exploreArgs.instrument,
                         "collect exact scan counts (forces serial execution)");
    exploreCmd->add_flag("--timings", exploreArgs.timings, "include wall time in outputs");

    TraceArgs traceArgs;
    CLI::App *traceCmd = app.add_subcommand("trace", "replay one trajectory by label");
    traceCmd->add_option("-m,--model", traceArgs.model, "model .rules file")->required();
    traceCmd->add_option("--label", traceArgs.label, "selection indices, e.g. 0.1.0")->required();
    traceCmd->add_flag("--generic", traceArgs.generic, "replay on the generic rules");
    traceCmd->add_flag("--fired", traceArgs.fired, "print fired rule instances");

    BenchArgs benchArgs;
    CLI::App *benchCmd =
        app.add_subcommand("bench", "compare generic vs specialized exploration");
    benchCmd->add_option("-m,--model", benchArgs.model, "model .rules file")->required();
    benchCmd->add_option("-j,--jobs", benchArgs.jobs, "also time a parallel specialized run");
    benchCmd->add_option("--json", benchArgs.jsonPath, "write the benchmark JSON here");

    std::vector<const char *> argv;
    argv.push_back("trajex");
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (pcCmd->parsed()) {
        return cmdPcModel(pcArgs, out, err);
    }
    if (compileCmd->parsed()) {
        return cmdCompile(compileArgs, out, err);
    }
    if (exploreCmd->parsed()) {
        return cmdExplore(exploreArgs, out, err);
    }
    if (traceCmd->parsed()) {
        return cmdTrace(traceArgs, out, err);
    }
    if (benchCmd->parsed()) {
        return cmdBench(benchArgs, out, err);
    }
    err << "error: no subcommand\n";
    return 1;
}

} // namespace trajex
