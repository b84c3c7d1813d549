#pragma once

#include <string>
#include <vector>

#include "qmc/solver.hpp"

namespace qmc {

struct PipelineOptions {
    Integer n = 10;
    SolveConfig solver;
    std::vector<std::string> dump_stages;  // subset of mc, flat, integer, scaled, sign, memory, counter-reset
    std::string dump_dir = ".";
};

struct StageReport {
    std::string name;
    StageSizes sizes;
};

struct PipelineReport {
    Classified answer;
    SolveResult solve;
    ScaleCertificate cert;
    std::vector<StageReport> stages;
    std::vector<std::string> dumped;

    bool conclusive() const { return answer.kind != Classified::Kind::Inconclusive; }
};

extern const std::vector<std::string> kStageNames;

PipelineReport approximate(const System& sys, const Formula& f, const std::string& location,
                           const PipelineOptions& opts = {});

// Runs flatten -> integerise -> to_counter_reset -> solve on a game whose start state has zero values.
PipelineReport approximate_game(const Game& g, std::size_t start, const PipelineOptions& opts = {});

struct CrosscheckReport {
    ExtRat direct;
    PipelineReport pipeline;
    bool agree = false;

    // Pipeline value as an extended rational; only meaningful when conclusive.
    ExtRat pipeline_value() const;
};

CrosscheckReport crosscheck(const System& sys, const Formula& f, const std::string& location,
                            const PipelineOptions& opts = {});

}  // namespace qmc
