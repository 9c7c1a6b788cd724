#pragma once
// Per-question generation loop and the batch driver with checkpoint/resume.

#include "finmcp/dataset.hpp"
#include "finmcp/session.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace finmcp {

struct GenParams {
    int max_completion_tokens = 2048;
    int seed = 17;
    double temperature = 0.01;
    double top_p = 0.15;

    json to_json() const;
    static GenParams from_json(const json& j, GenParams defaults);
};

struct ModelEndpoint {
    std::string base_url;
    std::string model;
    std::string api_key_env;  // env var name only; the value is never persisted
};

inline constexpr const char* kDefaultSystemPrompt =
    "You are a helpful assistant. If you receive a question without any indication of time "
    "period, always assume it to refer to FY2023. Always limit tool executions to 5 fiscal "
    "periods prior to the reference one.";

struct RunConfig {
    GenParams generator;                          // defaults per baseline table
    GenParams evaluator{4096, 17, 0.01, 0.15};    // larger completion budget
    std::string system_prompt = kDefaultSystemPrompt;
    std::string default_fiscal_year = "FY2023";
    int period_budget = 5;   // enforced through the prompt, not the server
    int max_rounds = 16;     // harness safety cap on model/tool rounds
    int max_periods_per_call = 0;  // optional hard server-side window
    ModelEndpoint model;
    ModelEndpoint judge;
    std::vector<int> judge_seeds = {17, 18};
    std::string fixtures_dir = "fixtures";
    std::string prompts_dir;  // judge prompt templates; empty = built-in defaults

    static RunConfig load(const std::string& path);
};

struct ChatToolCall {
    std::string id;
    std::string name;
    json arguments;
};

struct ChatReply {
    std::string content;
    std::vector<ChatToolCall> tool_calls;
    json structured;  // structured answer object when one was requested
    bool has_structured = false;
    json usage;  // token counts when the endpoint reports them
};

// Chat-completions abstraction: one turn in, one reply out. want_structured
// asks for a {"final_answer": string} object instead of free text.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual ChatReply complete(const std::vector<json>& messages, const json& tools,
                               const GenParams& params, bool want_structured) = 0;
};

// Replays canned turns for one question; powers every offline test.
class ScriptedChatClient : public ChatClient {
public:
    explicit ScriptedChatClient(json turns);
    ChatReply complete(const std::vector<json>& messages, const json& tools,
                       const GenParams& params, bool want_structured) override;

private:
    json turns_;
    size_t next_ = 0;
};

struct HttpChatOptions {
    ModelEndpoint endpoint;
    int max_retries = 3;
    std::function<void(std::chrono::milliseconds)> sleeper;
};

class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpChatOptions opts);
    ChatReply complete(const std::vector<json>& messages, const json& tools,
                       const GenParams& params, bool want_structured) override;

private:
    HttpChatOptions opts_;
};

using ChatClientFactory = std::function<std::unique_ptr<ChatClient>(const std::string& qid)>;

// Loads {"questions": {qid: [turn, ...]}} and builds scripted clients.
ChatClientFactory scripted_factory_from_file(const std::string& path);

struct RoundStat {
    int round = 0;
    std::string started_at;
    std::string ended_at;
    json usage;
};

struct RunRecord {
    std::string question_id;
    std::string status;  // ok | budget_exhausted | extraction_fallback | error
    std::string final_answer;
    std::string raw_output;
    std::string retrieved_context;
    std::vector<json> transcript;
    std::vector<ToolCallRecord> tool_calls;
    std::vector<RoundStat> rounds;
    std::string error_detail;

    json to_json() const;
    static RunRecord from_json(const json& j);
};

struct RunnerHooks {
    bool no_tools = false;  // ablation: advertise no tools to the model
    // Per-question clock; mock mode installs logical clocks so timestamps do
    // not depend on scheduling. One clock per question, never shared.
    std::function<ClockFn(const std::string& qid)> clock_factory;
    int crash_after = 0;  // test hook: _Exit after N checkpointed questions
};

RunRecord run_question(const QARecord& record, const RunConfig& config, ChatClient& client,
                       Provider& provider, RunLog* shared_log, const RunnerHooks& hooks = {});

// One RunRecord per dataset record, output order = input order. Completed
// questions checkpoint to <out_dir>/runs.jsonl and are skipped on resume.
std::vector<RunRecord> run_benchmark(const std::vector<QARecord>& dataset,
                                     const RunConfig& config, ChatClientFactory factory,
                                     Provider& provider, const std::string& out_dir,
                                     int concurrency, const RunnerHooks& hooks = {});

}  // namespace finmcp
