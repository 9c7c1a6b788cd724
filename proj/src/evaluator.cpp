#include "finmcp/evaluator.hpp"

#include "finmcp/util.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace finmcp {

double combine_judge_scores(int s1, int s2) {
    if (s1 < 0 || s1 > 2 || s2 < 0 || s2 > 2)
        throw std::out_of_range("judge scores must be 0, 1 or 2");
    return (s1 / 2.0 + s2 / 2.0) / 2.0;
}

namespace {

constexpr const char* kScoreReprompt =
    "Reply with only a JSON object of the form {\"score\": 0 | 1 | 2}.";
constexpr const char* kAccuracyReprompt =
    "Reply with only a JSON object of the form {\"accurate\": true | false}.";

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = text.find(from, pos)) != std::string::npos) {
        text.replace(pos, from.size(), to);
        pos += to.size();
    }
    return text;
}

// {"score": 0|1|2} somewhere in the reply; anything else is unparseable.
std::optional<int> parse_score(const std::string& reply) {
    json j = json::parse(reply, nullptr, false);
    if (j.is_discarded()) {
        // the reply may wrap the object in prose; try the outermost braces
        const size_t open = reply.find('{');
        const size_t close = reply.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close <= open)
            return std::nullopt;
        j = json::parse(reply.substr(open, close - open + 1), nullptr, false);
        if (j.is_discarded()) return std::nullopt;
    }
    if (!j.is_object() || !j.contains("score") || !j["score"].is_number_integer())
        return std::nullopt;
    const int s = j["score"].get<int>();
    if (s < 0 || s > 2) return std::nullopt;
    return s;
}

std::optional<bool> parse_accurate(const std::string& reply) {
    json j = json::parse(reply, nullptr, false);
    if (j.is_discarded()) {
        const size_t open = reply.find('{');
        const size_t close = reply.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close <= open)
            return std::nullopt;
        j = json::parse(reply.substr(open, close - open + 1), nullptr, false);
        if (j.is_discarded()) return std::nullopt;
    }
    if (!j.is_object() || !j.contains("accurate") || !j["accurate"].is_boolean())
        return std::nullopt;
    return j["accurate"].get<bool>();
}

json call_entry(const std::string& metric, int seed, int attempt, const std::string& system,
                const std::string& user, const std::string& reply) {
    return {{"metric", metric}, {"seed", seed},     {"attempt", attempt},
            {"system", system}, {"user", user},     {"reply", reply}};
}

// One judge with one retry on an unparseable verdict; nullopt means unscored.
template <typename Parse>
auto judged_verdict(JudgeClient& judge, const std::string& metric, const std::string& system,
                    const std::string& user, const GenParams& params, int seed,
                    const char* reprompt, json& transcript, Parse parse)
    -> decltype(parse(std::string())) {
    std::string reply = judge.complete(metric, system, user, params, seed);
    transcript.push_back(call_entry(metric, seed, 1, system, user, reply));
    auto verdict = parse(reply);
    if (verdict) return verdict;
    const std::string user2 = user + "\n\n" + reprompt;
    reply = judge.complete(metric, system, user2, params, seed);
    transcript.push_back(call_entry(metric, seed, 2, system, user2, reply));
    return parse(reply);
}

MetricOutcome score_two_judge_metric(const std::string& metric, const std::string& user_prompt,
                                     const std::string& context, JudgeClient& judge,
                                     const EvaluatorConfig& cfg) {
    MetricOutcome out;
    if (context.empty()) {
        out.score = 0.0;
        return out;
    }
    std::vector<int> scores;
    for (size_t i = 0; i < 2; ++i) {
        const int seed = cfg.seeds[i % cfg.seeds.size()];
        auto verdict = judged_verdict(judge, metric, "", user_prompt, cfg.params, seed,
                                      kScoreReprompt, out.transcript, parse_score);
        if (!verdict) return out;  // unscored, transcript kept
        scores.push_back(*verdict);
    }
    out.score = combine_judge_scores(scores[0], scores[1]);
    return out;
}

}  // namespace

JudgePrompts JudgePrompts::defaults() {
    JudgePrompts p;
    p.context_relevance =
        "### Instruction\n"
        "You are a world class expert designed to evaluate the relevance score of a Context "
        "in order to answer the Question.\n"
        "Your task is to determine if the Context contains proper information to answer the "
        "Question.\n"
        "Do not rely on your previous knowledge about the Question.\n"
        "Use only what is written in the Context and in the Question.\n"
        "Follow the instructions below:\n"
        "0. If the Context does not contain any relevant information to answer the Question, "
        "the score is 0.\n"
        "1. If the Context partially contains relevant information to answer the Question, "
        "the score is 1.\n"
        "2. If the Context contains relevant information to answer the Question, the score "
        "is 2.\n"
        "Reply with a JSON object of the form {\"score\": 0 | 1 | 2}. Do not explain.\n"
        "### Question: {question}\n"
        "### Context: {context}\n";
    p.groundedness =
        "### Instruction\n"
        "You are a world class expert designed to evaluate the groundedness of an assertion.\n"
        "You will be provided with an assertion and a context.\n"
        "Your task is to determine if the assertion is supported by the context.\n"
        "Follow the instructions below:\n"
        "0. If the assertion is not supported by the context, the score is 0.\n"
        "1. If the assertion is partially supported by the context, the score is 1.\n"
        "2. If the assertion is fully supported by the context, the score is 2.\n"
        "Reply with a JSON object of the form {\"score\": 0 | 1 | 2}. Do not explain.\n"
        "### Assertion: {answer}\n"
        "### Context: {context}\n";
    p.accuracy_rubric =
        "The response is inaccurate if it is incorrect and fails to address any aspect of "
        "the reference. The response is accurate if it displays the same or partially the "
        "same data reported in the reference. Rounding and formatting differences are "
        "allowed.";
    p.accuracy_user =
        "Question: {question}\n"
        "Response: {answer}\n"
        "Reference: {reference}\n\n"
        "Following the grading rules from the system prompt, decide whether the response is "
        "accurate with respect to the reference. Reply with a JSON object of the form "
        "{\"accurate\": true | false}. Do not explain.";
    return p;
}

JudgePrompts JudgePrompts::from_dir(const std::string& dir) {
    JudgePrompts p = defaults();
    auto maybe = [&](const char* file, std::string& slot) {
        const fs::path path = fs::path(dir) / file;
        if (fs::exists(path)) slot = read_file(path.string());
    };
    maybe("context_relevance.txt", p.context_relevance);
    maybe("response_groundedness.txt", p.groundedness);
    maybe("answer_accuracy_rubric.txt", p.accuracy_rubric);
    maybe("answer_accuracy_user.txt", p.accuracy_user);
    return p;
}

json EvalResult::to_json() const {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(); };
    return {{"question_id", question_id},
            {"status", status},
            {"context_relevance", opt(context_relevance)},
            {"response_groundedness", opt(response_groundedness)},
            {"answer_accuracy", opt(answer_accuracy)},
            {"high_quality", high_quality},
            {"accuracy_excluded", accuracy_excluded}};
}

EvalResult EvalResult::from_json(const json& j) {
    EvalResult r;
    r.question_id = j.value("question_id", "");
    r.status = j.value("status", "");
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key) || j[key].is_null()) return std::nullopt;
        return j[key].get<double>();
    };
    r.context_relevance = opt("context_relevance");
    r.response_groundedness = opt("response_groundedness");
    r.answer_accuracy = opt("answer_accuracy");
    r.high_quality = j.value("high_quality", false);
    r.accuracy_excluded = j.value("accuracy_excluded", false);
    return r;
}

ScriptedJudgeClient::ScriptedJudgeClient(json replies_by_metric)
    : replies_(std::move(replies_by_metric)) {
    if (!replies_.is_object()) replies_ = json::object();
}

std::string ScriptedJudgeClient::complete(const std::string& metric, const std::string&,
                                          const std::string&, const GenParams&, int) {
    if (!replies_.contains(metric)) return "";
    const json& list = replies_[metric];
    size_t& i = next_[metric];
    if (!list.is_array() || i >= list.size()) return "";
    return list[i++].get<std::string>();
}

HttpJudgeClient::HttpJudgeClient(HttpChatOptions opts)
    : inner_(std::make_unique<HttpChatClient>(std::move(opts))) {}

std::string HttpJudgeClient::complete(const std::string&, const std::string& system_prompt,
                                      const std::string& user_prompt, const GenParams& params,
                                      int seed) {
    std::vector<json> messages;
    if (!system_prompt.empty())
        messages.push_back({{"role", "system"}, {"content", system_prompt}});
    messages.push_back({{"role", "user"}, {"content", user_prompt}});
    GenParams p = params;
    p.seed = seed;
    return inner_->complete(messages, json::array(), p, false).content;
}

JudgeClientFactory scripted_judge_factory_from_file(const std::string& path) {
    auto script = std::make_shared<json>(json::parse(read_file(path)));
    return [script](const std::string& qid) -> std::unique_ptr<JudgeClient> {
        json replies = json::object();
        if (script->contains("replies") && (*script)["replies"].contains(qid))
            replies = (*script)["replies"][qid];
        return std::make_unique<ScriptedJudgeClient>(std::move(replies));
    };
}

JudgeClientFactory replay_judge_factory_from_file(const std::string& path) {
    // transcripts -> per-question raw reply queues, keyed by metric
    auto replies = std::make_shared<std::map<std::string, json>>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transcript file " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("question_id")) continue;
        json by_metric = json::object();
        // Named local: items() over a value() temporary dangles in a range-for.
        const json metrics = j.value("metrics", json::object());
        for (const auto& [metric, calls] : metrics.items()) {
            json q = json::array();
            for (const auto& call : calls) q.push_back(call.value("reply", ""));
            by_metric[metric] = q;
        }
        (*replies)[j["question_id"].get<std::string>()] = by_metric;
    }
    return [replies](const std::string& qid) -> std::unique_ptr<JudgeClient> {
        auto it = replies->find(qid);
        return std::make_unique<ScriptedJudgeClient>(it == replies->end() ? json::object()
                                                                          : it->second);
    };
}

MetricOutcome score_context_relevance(const std::string& question, const std::string& context,
                                      JudgeClient& judge, const EvaluatorConfig& cfg) {
    std::string prompt = replace_all(cfg.prompts.context_relevance, "{question}", question);
    prompt = replace_all(prompt, "{context}", context);
    return score_two_judge_metric("context_relevance", prompt, context, judge, cfg);
}

MetricOutcome score_response_groundedness(const std::string& answer, const std::string& context,
                                          JudgeClient& judge, const EvaluatorConfig& cfg) {
    std::string prompt = replace_all(cfg.prompts.groundedness, "{answer}", answer);
    prompt = replace_all(prompt, "{context}", context);
    return score_two_judge_metric("response_groundedness", prompt, context, judge, cfg);
}

MetricOutcome score_answer_accuracy(const std::string& question, const std::string& final_answer,
                                    const std::string& ground_truth, JudgeClient& judge,
                                    const EvaluatorConfig& cfg) {
    MetricOutcome out;
    std::string user = replace_all(cfg.prompts.accuracy_user, "{question}", question);
    user = replace_all(user, "{answer}", final_answer);
    user = replace_all(user, "{reference}", ground_truth);
    auto verdict =
        judged_verdict(judge, "answer_accuracy", cfg.prompts.accuracy_rubric, user, cfg.params,
                       cfg.seeds.empty() ? 17 : cfg.seeds[0], kAccuracyReprompt, out.transcript,
                       parse_accurate);
    if (verdict) out.score = *verdict ? 1.0 : 0.0;
    return out;
}

EvalResult evaluate_run(const RunRecord& run, const QARecord& record, JudgeClient& judge,
                        const EvaluatorConfig& cfg) {
    EvalResult r;
    r.question_id = run.question_id;
    r.accuracy_excluded = record.answer == kMissingAnswerFill;
    if (run.status == "error") {
        r.status = "error";
        return r;
    }
    r.status = "scored";

    MetricOutcome cr =
        score_context_relevance(record.question, run.retrieved_context, judge, cfg);
    MetricOutcome rg =
        score_response_groundedness(run.final_answer, run.retrieved_context, judge, cfg);
    MetricOutcome acc =
        score_answer_accuracy(record.question, run.final_answer, record.answer, judge, cfg);

    r.context_relevance = cr.score;
    r.response_groundedness = rg.score;
    r.answer_accuracy = acc.score;
    r.high_quality = cr.score && *cr.score >= kHighQualityThreshold;
    if (!cr.transcript.empty()) r.judge_transcripts["context_relevance"] = cr.transcript;
    if (!rg.transcript.empty()) r.judge_transcripts["response_groundedness"] = rg.transcript;
    if (!acc.transcript.empty()) r.judge_transcripts["answer_accuracy"] = acc.transcript;
    return r;
}

std::vector<EvalResult> evaluate_all(const std::vector<RunRecord>& runs,
                                     const std::vector<QARecord>& dataset,
                                     JudgeClientFactory factory, const EvaluatorConfig& cfg,
                                     const std::string& out_dir, int concurrency) {
    std::map<std::string, const QARecord*> by_id;
    for (const auto& rec : dataset) by_id[rec.id] = &rec;
    for (const auto& run : runs)
        if (!by_id.count(run.question_id))
            throw std::runtime_error("run has no dataset record: " + run.question_id);

    std::vector<EvalResult> results(runs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            auto judge = factory(runs[i].question_id);
            results[i] =
                evaluate_run(runs[i], *by_id.at(runs[i].question_id), *judge, cfg);
        }
    };
    const int threads = std::clamp(concurrency, 1, 64);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    fs::create_directories(out_dir);
    std::ostringstream evals, transcripts;
    for (const auto& r : results) {
        evals << r.to_json().dump() << "\n";
        transcripts << json({{"question_id", r.question_id}, {"metrics", r.judge_transcripts}})
                           .dump()
                    << "\n";
    }
    write_file_atomic((fs::path(out_dir) / "evals.jsonl").string(), evals.str());
    write_file_atomic((fs::path(out_dir) / "judge_transcripts.jsonl").string(),
                      transcripts.str());
    return results;
}

}  // namespace finmcp
