#pragma once
// Joins eval results with dataset labels, aggregates along the conditioning
// axes, and emits tables, bar charts and the headline summary.

#include "finmcp/dataset.hpp"
#include "finmcp/evaluator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace finmcp {

struct JoinedRow {
    const QARecord* record = nullptr;
    const EvalResult* eval = nullptr;
};

// Total join on question_id; ids on one side only are an error.
std::vector<JoinedRow> join_results(const std::vector<QARecord>& dataset,
                                    const std::vector<EvalResult>& evals);

enum class GroupKey {
    Category,       // raw dataset category
    CategorySplit,  // Financials | Other
    ContextQuality, // High-quality | Low-quality | Unscored
    ReasoningGroup,
    FineType,
    NumberBin,      // number occurrences in the reference answer
};

std::string group_key_name(GroupKey key);
std::string group_value(GroupKey key, const JoinedRow& row);

struct AggregateRow {
    std::vector<std::string> group;  // one value per grouping key
    size_t n = 0;
    std::optional<double> mean_accuracy;
    std::optional<double> mean_context_relevance;
    std::optional<double> mean_groundedness;
    size_t n_accuracy = 0;  // scored and not excluded
    size_t n_context_relevance = 0;
    size_t n_groundedness = 0;
    bool small_sample = false;
};

// Deterministic partition: rows sorted by group tuple; Σn = input size.
// Accuracy means skip records flagged accuracy_excluded.
std::vector<AggregateRow> aggregate(const std::vector<JoinedRow>& rows,
                                    const std::vector<GroupKey>& keys, size_t n_floor = 30);

struct ReportOptions {
    std::string format = "csv";  // csv | md
    size_t n_floor = 30;
};

// Writes one table + chart per figure analogue plus summary files into out_dir.
void emit_report(const std::vector<QARecord>& dataset, const std::vector<EvalResult>& evals,
                 const CorpusStats& stats, const std::string& out_dir,
                 const ReportOptions& opts);

}  // namespace finmcp
