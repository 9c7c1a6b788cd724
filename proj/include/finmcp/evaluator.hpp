#pragma once
// LLM-judge scoring of RunRecords: Context Relevance, Response Groundedness,
// Answer Accuracy, with transcript capture and deterministic replay.

#include "finmcp/runner.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace finmcp {

// (s1/2 + s2/2)/2 for judge scores in {0,1,2}; lands on the 0.25 lattice.
double combine_judge_scores(int s1, int s2);

inline constexpr double kHighQualityThreshold = 0.75;

struct EvalResult {
    std::string question_id;
    std::string status;  // scored | error
    std::optional<double> context_relevance;
    std::optional<double> response_groundedness;
    std::optional<double> answer_accuracy;
    bool high_quality = false;      // context_relevance scored and >= 0.75
    bool accuracy_excluded = false; // ground truth was the step-2 placeholder
    json judge_transcripts = json::object();

    json to_json() const;  // scores only; transcripts are written separately
    static EvalResult from_json(const json& j);
};

// One judge invocation. Implementations return the raw reply text; parsing
// happens in the evaluator so replay shares the same path.
class JudgeClient {
public:
    virtual ~JudgeClient() = default;
    virtual std::string complete(const std::string& metric, const std::string& system_prompt,
                                 const std::string& user_prompt, const GenParams& params,
                                 int seed) = 0;
};

// Serves canned raw replies per metric, consumed in call order.
class ScriptedJudgeClient : public JudgeClient {
public:
    explicit ScriptedJudgeClient(json replies_by_metric);
    std::string complete(const std::string& metric, const std::string& system_prompt,
                         const std::string& user_prompt, const GenParams& params,
                         int seed) override;

private:
    json replies_;
    std::map<std::string, size_t> next_;
};

class HttpJudgeClient : public JudgeClient {
public:
    explicit HttpJudgeClient(HttpChatOptions opts);
    std::string complete(const std::string& metric, const std::string& system_prompt,
                         const std::string& user_prompt, const GenParams& params,
                         int seed) override;

private:
    std::unique_ptr<HttpChatClient> inner_;
};

using JudgeClientFactory = std::function<std::unique_ptr<JudgeClient>(const std::string& qid)>;

// {"replies": {qid: {metric: [raw reply, ...]}}}
JudgeClientFactory scripted_judge_factory_from_file(const std::string& path);

// Replays raw replies recorded in a judge_transcripts.jsonl file.
JudgeClientFactory replay_judge_factory_from_file(const std::string& path);

struct JudgePrompts {
    std::string context_relevance;    // placeholders: {question} {context}
    std::string groundedness;         // placeholders: {answer} {context}
    std::string accuracy_rubric;      // system prompt, verbatim rubric
    std::string accuracy_user;        // placeholders: {question} {answer} {reference}

    static JudgePrompts defaults();
    static JudgePrompts from_dir(const std::string& dir);  // missing files keep defaults
};

struct EvaluatorConfig {
    GenParams params{4096, 17, 0.01, 0.15};
    std::vector<int> seeds = {17, 18};
    JudgePrompts prompts = JudgePrompts::defaults();
};

struct MetricOutcome {
    std::optional<double> score;
    json transcript = json::array();  // one entry per judge call made
};

MetricOutcome score_context_relevance(const std::string& question, const std::string& context,
                                      JudgeClient& judge, const EvaluatorConfig& cfg);
MetricOutcome score_response_groundedness(const std::string& answer, const std::string& context,
                                          JudgeClient& judge, const EvaluatorConfig& cfg);
MetricOutcome score_answer_accuracy(const std::string& question, const std::string& final_answer,
                                    const std::string& ground_truth, JudgeClient& judge,
                                    const EvaluatorConfig& cfg);

EvalResult evaluate_run(const RunRecord& run, const QARecord& record, JudgeClient& judge,
                        const EvaluatorConfig& cfg);

// Scores every run (bounded parallel), writes <out_dir>/evals.jsonl and
// <out_dir>/judge_transcripts.jsonl in dataset order.
std::vector<EvalResult> evaluate_all(const std::vector<RunRecord>& runs,
                                     const std::vector<QARecord>& dataset,
                                     JudgeClientFactory factory, const EvaluatorConfig& cfg,
                                     const std::string& out_dir, int concurrency);

}  // namespace finmcp
