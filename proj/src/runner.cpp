#include "finmcp/runner.hpp"

#include "finmcp/util.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"

namespace fs = std::filesystem;

namespace finmcp {

namespace {

constexpr const char* kExtractionPrompt =
    "Extract the final answer from your previous response. Reply with a JSON object of the "
    "form {\"final_answer\": string}.";

struct ModelEndpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json openai_tools(const json& mcp_tools_result) {
    json out = json::array();
    for (const auto& t : mcp_tools_result.at("tools"))
        out.push_back({{"type", "function"},
                       {"function",
                        {{"name", t.at("name")},
                         {"description", t.at("description")},
                         {"parameters", t.at("inputSchema")}}}});
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// call_id format is "<qid>-<seq>"; both halves are needed for log ordering.
std::pair<std::string, long> split_call_id(const std::string& call_id) {
    const size_t dash = call_id.rfind('-');
    if (dash == std::string::npos) return {call_id, 0};
    long seq = 0;
    try {
        seq = std::stol(call_id.substr(dash + 1));
    } catch (...) {
        return {call_id, 0};
    }
    return {call_id.substr(0, dash), seq};
}

}  // namespace

json GenParams::to_json() const {
    return {{"max_completion_tokens", max_completion_tokens},
            {"seed", seed},
            {"temperature", temperature},
            {"top_p", top_p}};
}

GenParams GenParams::from_json(const json& j, GenParams defaults) {
    GenParams p = defaults;
    if (!j.is_object()) return p;
    p.max_completion_tokens = j.value("max_completion_tokens", p.max_completion_tokens);
    p.seed = j.value("seed", p.seed);
    p.temperature = j.value("temperature", p.temperature);
    p.top_p = j.value("top_p", p.top_p);
    return p;
}

RunConfig RunConfig::load(const std::string& path) {
    RunConfig cfg;
    json j = json::parse(read_file(path));
    const fs::path base = fs::path(path).parent_path();

    auto endpoint = [](const json& e, ModelEndpoint def) {
        if (!e.is_object()) return def;
        def.base_url = e.value("base_url", def.base_url);
        def.model = e.value("model", def.model);
        def.api_key_env = e.value("api_key_env", def.api_key_env);
        return def;
    };
    cfg.model = endpoint(j.value("model", json()), cfg.model);
    cfg.judge = endpoint(j.value("judge", json()), cfg.judge);
    cfg.generator = GenParams::from_json(j.value("generator", json()), cfg.generator);
    cfg.evaluator = GenParams::from_json(j.value("evaluator", json()), cfg.evaluator);
    cfg.default_fiscal_year = j.value("default_fiscal_year", cfg.default_fiscal_year);
    cfg.period_budget = j.value("period_budget", cfg.period_budget);
    cfg.max_rounds = j.value("max_rounds", cfg.max_rounds);
    cfg.max_periods_per_call = j.value("max_periods_per_call", cfg.max_periods_per_call);
    if (j.contains("fixtures_dir")) {
        fs::path p = j["fixtures_dir"].get<std::string>();
        if (p.is_relative()) p = base / p;
        cfg.fixtures_dir = p.lexically_normal().string();
    }
    if (j.contains("judge_seeds")) cfg.judge_seeds = j["judge_seeds"].get<std::vector<int>>();
    if (j.contains("prompts_dir")) {
        fs::path p = j["prompts_dir"].get<std::string>();
        if (p.is_relative()) p = base / p;
        cfg.prompts_dir = p.string();
    }
    if (j.contains("system_prompt_file")) {
        fs::path p = j["system_prompt_file"].get<std::string>();
        if (p.is_relative()) p = base / p;
        cfg.system_prompt = trim(read_file(p.string()));
    } else if (j.contains("system_prompt")) {
        cfg.system_prompt = j["system_prompt"].get<std::string>();
    }
    return cfg;
}

ScriptedChatClient::ScriptedChatClient(json turns) : turns_(std::move(turns)) {
    if (!turns_.is_array()) turns_ = json::array();
}

ChatReply ScriptedChatClient::complete(const std::vector<json>&, const json&, const GenParams&,
                                       bool) {
    ChatReply r;
    if (next_ >= turns_.size()) return r;  // exhausted script reads as a final empty turn
    const json turn = turns_[next_++];
    if (turn.contains("error")) throw ModelEndpointError(turn["error"].get<std::string>());
    if (turn.contains("content")) r.content = turn["content"].get<std::string>();
    if (turn.contains("tool_calls")) {
        int n = 0;
        for (const auto& c : turn["tool_calls"])
            r.tool_calls.push_back({"call_" + std::to_string(++n),
                                    c.at("name").get<std::string>(),
                                    c.value("arguments", json::object())});
    }
    if (turn.contains("structured")) {
        r.structured = turn["structured"];
        r.has_structured = true;
    }
    if (turn.contains("usage")) r.usage = turn["usage"];
    return r;
}

HttpChatClient::HttpChatClient(HttpChatOptions opts) : opts_(std::move(opts)) {
    if (!opts_.sleeper)
        opts_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

ChatReply HttpChatClient::complete(const std::vector<json>& messages, const json& tools,
                                   const GenParams& params, bool want_structured) {
    // base_url splits into host root and path prefix ("http://h:p/v1" style).
    std::string host = opts_.endpoint.base_url;
    std::string prefix;
    const size_t scheme = host.find("://");
    const size_t slash = scheme == std::string::npos ? host.find('/') : host.find('/', scheme + 3);
    if (slash != std::string::npos) {
        prefix = host.substr(slash);
        host = host.substr(0, slash);
    }
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

    json body = {{"model", opts_.endpoint.model},
                 {"messages", messages},
                 {"max_completion_tokens", params.max_completion_tokens},
                 {"seed", params.seed},
                 {"temperature", params.temperature},
                 {"top_p", params.top_p}};
    if (tools.is_array() && !tools.empty()) {
        body["tools"] = tools;
        body["tool_choice"] = "auto";
    }
    if (want_structured) body["response_format"] = {{"type", "json_object"}};

    httplib::Client client(host);
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    httplib::Headers headers;
    if (!opts_.endpoint.api_key_env.empty()) {
        const char* key = std::getenv(opts_.endpoint.api_key_env.c_str());
        if (key && *key) headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    json resp;
    for (int attempt = 0;; ++attempt) {
        auto res = client.Post(prefix + "/chat/completions", headers, body.dump(),
                               "application/json");
        if (res && res->status == 200) {
            resp = json::parse(res->body, nullptr, false);
            if (!resp.is_discarded()) break;
        }
        if (res && (res->status == 401 || res->status == 403))
            throw ModelEndpointError("model endpoint rejected authorization");
        const bool retryable =
            !res || res->status == 429 || (res->status >= 500 && res->status < 600);
        if (!retryable)
            throw ModelEndpointError("model endpoint HTTP " + std::to_string(res->status));
        if (attempt >= opts_.max_retries)
            throw ModelEndpointError("model endpoint unreachable after retries");
        auto delay = std::chrono::milliseconds(50) * (1 << attempt);
        opts_.sleeper(std::min(delay, std::chrono::milliseconds(2000)));
    }

    ChatReply r;
    const json& msg = resp.at("choices").at(0).at("message");
    if (msg.contains("content") && msg["content"].is_string())
        r.content = msg["content"].get<std::string>();
    if (msg.contains("tool_calls"))
        for (const auto& c : msg["tool_calls"]) {
            json args = json::parse(c.at("function").at("arguments").get<std::string>(),
                                    nullptr, false);
            if (args.is_discarded()) args = json::object();
            r.tool_calls.push_back(
                {c.value("id", ""), c.at("function").at("name").get<std::string>(), args});
        }
    if (want_structured) {
        json parsed = json::parse(r.content, nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) {
            r.structured = parsed;
            r.has_structured = true;
        }
    }
    if (resp.contains("usage")) r.usage = resp["usage"];
    return r;
}

ChatClientFactory scripted_factory_from_file(const std::string& path) {
    auto script = std::make_shared<json>(json::parse(read_file(path)));
    return [script](const std::string& qid) -> std::unique_ptr<ChatClient> {
        json turns = json::array();
        if (script->contains("questions") && (*script)["questions"].contains(qid))
            turns = (*script)["questions"][qid];
        return std::make_unique<ScriptedChatClient>(std::move(turns));
    };
}

json RunRecord::to_json() const {
    json tc = json::array();
    for (const auto& r : tool_calls) tc.push_back(r.to_json());
    json rs = json::array();
    for (const auto& r : rounds)
        rs.push_back({{"round", r.round},
                      {"started_at", r.started_at},
                      {"ended_at", r.ended_at},
                      {"usage", r.usage}});
    return {{"question_id", question_id},
            {"status", status},
            {"final_answer", final_answer},
            {"raw_output", raw_output},
            {"retrieved_context", retrieved_context},
            {"transcript", transcript},
            {"tool_calls", tc},
            {"rounds", rs},
            {"error_detail", error_detail}};
}

RunRecord RunRecord::from_json(const json& j) {
    RunRecord r;
    r.question_id = j.value("question_id", "");
    r.status = j.value("status", "");
    r.final_answer = j.value("final_answer", "");
    r.raw_output = j.value("raw_output", "");
    r.retrieved_context = j.value("retrieved_context", "");
    for (const auto& m : j.value("transcript", json::array())) r.transcript.push_back(m);
    for (const auto& t : j.value("tool_calls", json::array()))
        r.tool_calls.push_back(tool_call_record_from_json(t));
    for (const auto& s : j.value("rounds", json::array())) {
        RoundStat rs;
        rs.round = s.value("round", 0);
        rs.started_at = s.value("started_at", "");
        rs.ended_at = s.value("ended_at", "");
        rs.usage = s.value("usage", json());
        r.rounds.push_back(std::move(rs));
    }
    r.error_detail = j.value("error_detail", "");
    return r;
}

RunRecord run_question(const QARecord& record, const RunConfig& config, ChatClient& client,
                       Provider& provider, RunLog* shared_log, const RunnerHooks& hooks) {
    RunRecord out;
    out.question_id = record.id;
    ClockFn clock = hooks.clock_factory ? hooks.clock_factory(record.id) : wall_clock();

    ToolSuiteOptions topts;
    topts.max_periods_per_call = config.max_periods_per_call;
    ToolSuite suite(provider, topts);
    CapturingRunLog qlog(shared_log);
    SessionOptions sopts;
    sopts.log_prefix = record.id;
    sopts.clock = clock;
    Session session(suite, &qlog, sopts);

    int rpc_id = 0;
    auto request = [&](const std::string& method, json params) {
        return session.handle_message(rpc::make_request(++rpc_id, method, std::move(params)));
    };

    request("initialize", {{"protocolVersion", kProtocolVersion},
                           {"capabilities", json::object()},
                           {"clientInfo", {{"name", "finmcp-runner"}, {"version", kServerVersion}}}});
    session.handle_message(rpc::make_notification("notifications/initialized"));

    json tools = json::array();
    if (!hooks.no_tools) {
        auto listed = request("tools/list", json());
        tools = openai_tools((*listed)["result"]);
    }

    std::vector<json> messages;
    messages.push_back({{"role", "system"}, {"content", config.system_prompt}});
    messages.push_back({{"role", "user"}, {"content", record.question}});

    std::vector<std::string> context_parts;
    std::string last_content;
    bool final_turn_seen = false;

    try {
        for (int round = 1; round <= config.max_rounds; ++round) {
            RoundStat rs;
            rs.round = round;
            rs.started_at = clock();
            ChatReply reply = client.complete(messages, tools, config.generator, false);
            rs.ended_at = clock();
            rs.usage = reply.usage;
            out.rounds.push_back(rs);

            if (reply.tool_calls.empty()) {
                last_content = reply.content;
                messages.push_back({{"role", "assistant"}, {"content", reply.content}});
                final_turn_seen = true;
                break;
            }

            json tc = json::array();
            for (const auto& c : reply.tool_calls)
                tc.push_back({{"id", c.id},
                              {"type", "function"},
                              {"function",
                               {{"name", c.name}, {"arguments", c.arguments.dump()}}}});
            messages.push_back(
                {{"role", "assistant"}, {"content", reply.content}, {"tool_calls", tc}});
            if (!reply.content.empty()) last_content = reply.content;

            for (const auto& c : reply.tool_calls) {
                auto resp =
                    request("tools/call", {{"name", c.name}, {"arguments", c.arguments}});
                std::string text;
                if (resp->contains("error")) {
                    text = "Error: " + (*resp)["error"]["message"].get<std::string>();
                } else {
                    for (const auto& item : (*resp)["result"]["content"])
                        if (item.value("type", "") == "text")
                            text += item["text"].get<std::string>();
                }
                context_parts.push_back(text);
                messages.push_back({{"role", "tool"},
                                    {"tool_call_id", c.id},
                                    {"name", c.name},
                                    {"content", text}});
            }
        }

        out.raw_output = last_content;
        if (!final_turn_seen) {
            out.status = "budget_exhausted";
            out.final_answer = last_content;
        } else {
            messages.push_back({{"role", "user"}, {"content", kExtractionPrompt}});
            RoundStat rs;
            rs.round = static_cast<int>(out.rounds.size()) + 1;
            rs.started_at = clock();
            ChatReply ex = client.complete(messages, json::array(), config.generator, true);
            rs.ended_at = clock();
            rs.usage = ex.usage;
            out.rounds.push_back(rs);

            if (ex.has_structured && ex.structured.contains("final_answer") &&
                ex.structured["final_answer"].is_string() &&
                !ex.structured["final_answer"].get<std::string>().empty()) {
                out.final_answer = ex.structured["final_answer"].get<std::string>();
                out.status = "ok";
                messages.push_back({{"role", "assistant"}, {"content", ex.structured.dump()}});
            } else {
                out.final_answer = last_content;
                out.status = "extraction_fallback";
                messages.push_back({{"role", "assistant"}, {"content", ex.content}});
            }
        }
    } catch (const std::exception& e) {
        out.status = "error";
        out.error_detail = e.what();
        out.final_answer.clear();
    }

    request("shutdown", json());
    out.retrieved_context = join(context_parts, "\n\n");
    out.transcript = messages;
    out.tool_calls = qlog.records;
    return out;
}

namespace {

// Rewrites the shared tool log so entries sort by dataset position then call
// sequence; scheduling order stops mattering once a run completes.
void canonicalize_tool_log(const std::string& path, const std::vector<QARecord>& dataset) {
    if (!fs::exists(path)) return;
    std::map<std::string, size_t> order;
    for (size_t i = 0; i < dataset.size(); ++i) order[dataset[i].id] = i;

    struct Entry {
        size_t pos;
        long seq;
        std::string line;
    };
    std::vector<Entry> entries;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        auto [qid, seq] = split_call_id(j.value("call_id", ""));
        auto it = order.find(qid);
        entries.push_back({it == order.end() ? dataset.size() : it->second, seq, line});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.pos != b.pos ? a.pos < b.pos : a.seq < b.seq;
    });
    std::ostringstream all;
    for (const auto& e : entries) all << e.line << "\n";
    write_file_atomic(path, all.str());
}

// Drops tool-log lines for questions that never reached the checkpoint, so a
// resumed run re-executes them without leaving duplicates behind.
void scrub_tool_log(const std::string& path, const std::set<std::string>& completed) {
    if (!fs::exists(path)) return;
    std::ostringstream keep;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        auto [qid, seq] = split_call_id(j.value("call_id", ""));
        (void)seq;
        if (completed.count(qid)) keep << line << "\n";
    }
    write_file_atomic(path, keep.str());
}

}  // namespace

std::vector<RunRecord> run_benchmark(const std::vector<QARecord>& dataset,
                                     const RunConfig& config, ChatClientFactory factory,
                                     Provider& provider, const std::string& out_dir,
                                     int concurrency, const RunnerHooks& hooks) {
    fs::create_directories(out_dir);
    const std::string runs_path = (fs::path(out_dir) / "runs.jsonl").string();
    const std::string tool_log_path = (fs::path(out_dir) / "toolcalls.jsonl").string();

    std::map<std::string, json> done;
    if (fs::exists(runs_path)) {
        std::ifstream in(runs_path);
        std::string line;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("question_id")) continue;
            // Key must be read before the move lands in the map slot.
            std::string qid = j["question_id"].get<std::string>();
            done[qid] = std::move(j);
        }
    }
    std::set<std::string> completed_ids;
    for (const auto& [qid, j] : done) completed_ids.insert(qid);
    scrub_tool_log(tool_log_path, completed_ids);

    RunLog shared_log(tool_log_path);
    std::vector<std::optional<RunRecord>> results(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) {
        auto it = done.find(dataset[i].id);
        if (it != done.end()) results[i] = RunRecord::from_json(it->second);
    }

    std::atomic<size_t> next{0};
    std::atomic<int> fresh{0};
    std::mutex ckpt_mu;

    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= dataset.size()) return;
            if (results[i]) continue;
            auto client = factory(dataset[i].id);
            RunRecord rec =
                run_question(dataset[i], config, *client, provider, &shared_log, hooks);
            std::lock_guard lock(ckpt_mu);
            {
                std::ofstream out(runs_path, std::ios::app);
                out << rec.to_json().dump() << "\n";
            }
            results[i] = std::move(rec);
            const int n = ++fresh;
            if (hooks.crash_after > 0 && n >= hooks.crash_after) std::_Exit(9);
        }
    };

    const int threads = std::clamp(concurrency, 1, 64);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream all;
    std::vector<RunRecord> out;
    out.reserve(dataset.size());
    for (auto& r : results) {
        all << r->to_json().dump() << "\n";
        out.push_back(std::move(*r));
    }
    write_file_atomic(runs_path, all.str());
    canonicalize_tool_log(tool_log_path, dataset);
    return out;
}

}  // namespace finmcp
