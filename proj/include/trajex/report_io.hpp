#ifndef TRAJEX_REPORT_IO_HPP
#define TRAJEX_REPORT_IO_HPP

#include <string>

#include "trajex/explore.hpp"

namespace trajex {

struct ReportRenderOptions {
    bool includeWallTime = false;   // timings break byte-identical reports
    bool includeScanCounts = false; // only meaningful on instrumented runs
};

/// Canonical JSON: sorted keys, rationals rendered "p/q", labels as dotted
/// selection indices. Byte-identical for identical exploration results.
std::string reportToJson(const ExplorationReport &report, const ReportRenderOptions &opts = {});

/// One row per (STI, observable) with the envelope bounds and the
/// representative labels. Header only when nothing was explored.
std::string reportToCsv(const ExplorationReport &report);

} // namespace trajex

#endif
