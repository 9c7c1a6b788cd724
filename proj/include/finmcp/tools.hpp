#pragma once

#include "finmcp/provider.hpp"

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace finmcp {

// Timestamp source for call records. Mock runs inject a logical clock so two
// identical runs produce byte-identical logs.
using ClockFn = std::function<std::string()>;
ClockFn wall_clock();
ClockFn logical_clock(const std::string& prefix = "T");

enum class CallStatus { Ok, InvalidArgs, UnknownTool, ExecError };

struct ToolCallResult {
    CallStatus status = CallStatus::Ok;
    std::string error_message;  // set for InvalidArgs / UnknownTool
    json content;               // MCP tool result for Ok and ExecError
};

struct ToolCallRecord {
    std::string call_id;
    std::string tool;
    json args;
    std::string started_at;
    std::string ended_at;
    std::string outcome;  // "ok" | "invalid_args" | "unknown_tool" | "exec_error"
    std::string error_detail;
    std::string result_digest;

    json to_json() const;
};

ToolCallRecord tool_call_record_from_json(const json& j);

// Append-only JSONL sink shared by concurrent sessions. An empty path keeps
// records out of the filesystem (in-memory subclasses only).
class RunLog {
public:
    explicit RunLog(std::string path);
    virtual ~RunLog() = default;
    virtual void append(const ToolCallRecord& record);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::mutex mu_;
};

// Per-question tap: forwards to the shared file log and keeps an in-memory
// copy for the RunRecord.
class CapturingRunLog : public RunLog {
public:
    explicit CapturingRunLog(RunLog* base) : RunLog(""), base_(base) {}
    void append(const ToolCallRecord& record) override {
        if (base_) base_->append(record);
        records.push_back(record);
    }
    std::vector<ToolCallRecord> records;

private:
    RunLog* base_;
};

struct ToolSpec {
    std::string name;
    std::string description;
    json input_schema;
    StatementKind kind;
};

struct ToolSuiteOptions {
    // Caps num_periods per call; 0 disables the cap.
    int max_periods_per_call = 0;
};

class ToolSuite {
public:
    ToolSuite(Provider& provider, ToolSuiteOptions opts = {});

    const std::vector<ToolSpec>& specs() const { return specs_; }
    json list_tools_json() const;

    // Validates arguments against the tool schema, executes, and appends one
    // record to `log` when given. `call_prefix` seeds the call_id sequence.
    ToolCallResult call(const std::string& name, const json& args, RunLog* log = nullptr,
                        const std::string& call_prefix = "call", ClockFn clock = nullptr);

private:
    Provider& provider_;
    ToolSuiteOptions opts_;
    std::vector<ToolSpec> specs_;
    std::uint64_t seq_ = 0;
    std::mutex mu_;
};

}  // namespace finmcp
