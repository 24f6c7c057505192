#include "trajex/report_io.hpp"

#include <json.hpp>

#include <sstream>

namespace trajex {

namespace {

using json = nlohmann::json;

std::string indicesToString(const std::vector<std::uint32_t> &idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        s += (i ? "." : "") + std::to_string(idx[i]);
    }
    return s;
}

json envelopeToJson(const Envelope &env) {
    json observables = json::array();
    for (std::size_t o = 0; o < env.observables.size(); ++o) {
        json perSti = json::array();
        for (int t = 1; t <= env.horizon; ++t) {
            const ObservableStat &s = env.stats[o][t - 1];
            json row;
            row["sti"] = t;
            if (s.defined) {
                row["min"] = s.min.toString();
                row["max"] = s.max.toString();
                row["argmin"] = indicesToString(s.argmin);
                row["argmax"] = indicesToString(s.argmax);
            } else {
                row["min"] = nullptr;
                row["max"] = nullptr;
            }
            perSti.push_back(std::move(row));
        }
        json entry;
        entry["name"] = env.observables[o];
        entry["perSti"] = std::move(perSti);
        observables.push_back(std::move(entry));
    }
    json out;
    out["horizon"] = env.horizon;
    out["observables"] = std::move(observables);
    return out;
}

json valuesToJson(const Envelope &env, const std::vector<std::vector<Rational>> &values) {
    json out;
    for (std::size_t o = 0; o < values.size(); ++o) {
        json seq = json::array();
        for (const auto &v : values[o]) {
            seq.push_back(v.toString());
        }
        out[env.observables[o]] = std::move(seq);
    }
    return out;
}

} // namespace

std::string reportToJson(const ExplorationReport &report, const ReportRenderOptions &opts) {
    json j;
    j["schema"] = report.schema;
    j["mode"] = exploreModeName(report.mode);
    j["theorem"] = report.theorem.empty() ? json(nullptr) : json(report.theorem);
    j["negated"] = report.negated;
    j["verdict"] = report.verdict;
    j["valid"] = report.valid;
    if (!report.error.empty()) {
        j["error"] = report.error;
    }
    json counts;
    counts["completed"] = report.completed;
    counts["pruned"] = report.pruned;
    counts["aborted"] = report.aborted;
    j["counts"] = std::move(counts);
    j["theoremHeldOnCompleted"] = report.theoremHeldOnCompleted;
    j["envelope"] = envelopeToJson(report.envelope);
    if (report.counterexample) {
        json cex;
        cex["label"] = report.counterexample->label;
        json choices = json::array();
        for (const auto &e : report.counterexample->choices) {
            json c;
            c["rule"] = e.key.origin;
            c["sti"] = e.key.sti;
            json ctx;
            for (const auto &[var, val] : e.key.context) {
                ctx[var] = val;
            }
            c["context"] = std::move(ctx);
            c["index"] = e.index;
            c["of"] = e.candidateCount;
            c["picked"] = e.picked;
            choices.push_back(std::move(c));
        }
        cex["choices"] = std::move(choices);
        cex["observables"] = valuesToJson(report.envelope, report.counterexample->values);
        j["counterexample"] = std::move(cex);
    } else {
        j["counterexample"] = nullptr;
    }
    if (!report.map.empty()) {
        json map = json::array();
        for (const auto &rec : report.map) {
            json m;
            m["label"] = rec.label;
            m["status"] = leafStatusName(rec.status);
            if (rec.status == LeafStatus::Completed) {
                m["observables"] = valuesToJson(report.envelope, rec.values);
            }
            map.push_back(std::move(m));
        }
        j["map"] = std::move(map);
    }
    if (opts.includeScanCounts && report.hasScanStats) {
        json scans = json::array();
        for (const auto &[key, count] : report.scanStats.scans) {
            json row;
            row["rule"] = key.first;
            row["sti"] = key.second;
            row["scans"] = count;
            scans.push_back(std::move(row));
        }
        j["scanCounts"] = std::move(scans);
    }
    if (opts.includeWallTime) {
        j["wallSeconds"] = report.wallSeconds;
    }
    return j.dump(2) + "\n";
}

std::string reportToCsv(const ExplorationReport &report) {
    std::ostringstream os;
    os << "sti,observable,min,max,argmin,argmax\n";
    const Envelope &env = report.envelope;
    for (std::size_t o = 0; o < env.observables.size(); ++o) {
        for (int t = 1; t <= env.horizon; ++t) {
            const ObservableStat &s = env.stats[o][t - 1];
            if (!s.defined) {
                continue;
            }
            os << t << "," << env.observables[o] << "," << s.min.toString() << ","
               << s.max.toString() << "," << indicesToString(s.argmin) << ","
               << indicesToString(s.argmax) << "\n";
        }
    }
    return os.str();
}

} // namespace trajex
