#include "finmcp/tools.hpp"

#include "finmcp/digest.hpp"
#include "finmcp/util.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

namespace finmcp {

ClockFn wall_clock() {
    return [] {
        using namespace std::chrono;
        const auto now = system_clock::now();
        const auto secs = time_point_cast<seconds>(now);
        const auto ms = duration_cast<milliseconds>(now - secs).count();
        const std::time_t t = system_clock::to_time_t(secs);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[80];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                      tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min,
                      tm.tm_sec, static_cast<int>(ms));
        return std::string(buf);
    };
}

ClockFn logical_clock(const std::string& prefix) {
    auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
    return [prefix, counter] {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "+%06llu",
                      static_cast<unsigned long long>(counter->fetch_add(1) + 1));
        return prefix + buf;
    };
}

json ToolCallRecord::to_json() const {
    json j = {{"call_id", call_id},   {"tool", tool},
              {"args", args},         {"started_at", started_at},
              {"ended_at", ended_at}, {"outcome", outcome},
              {"result_digest", result_digest}};
    if (!error_detail.empty()) j["error_detail"] = error_detail;
    return j;
}

ToolCallRecord tool_call_record_from_json(const json& j) {
    ToolCallRecord r;
    r.call_id = j.value("call_id", "");
    r.tool = j.value("tool", "");
    r.args = j.value("args", json());
    r.started_at = j.value("started_at", "");
    r.ended_at = j.value("ended_at", "");
    r.outcome = j.value("outcome", "");
    r.error_detail = j.value("error_detail", "");
    r.result_digest = j.value("result_digest", "");
    return r;
}

RunLog::RunLog(std::string path) : path_(std::move(path)) {}

void RunLog::append(const ToolCallRecord& record) {
    if (path_.empty()) return;
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::app);
    out << record.to_json().dump() << "\n";
}

namespace {

json string_prop(const std::string& description) {
    return {{"type", "string"}, {"description", description}};
}

json statement_schema() {
    return {{"type", "object"},
            {"properties",
             {{"comp_name", string_prop("Company name")},
              {"num_periods",
               {{"type", "integer"},
                {"minimum", 1},
                {"description", "Trailing fiscal periods to include, most recent first"}}},
              {"period", string_prop("Fiscal period, e.g. FY2023 or FY2023Q2")},
              {"scale",
               {{"type", "string"},
                {"enum", {"units", "thousands", "millions", "billions"}},
                {"description", "Scale applied to monetary values"}}}}},
            {"required", {"comp_name", "period", "scale"}},
            {"additionalProperties", false}};
}

json acquisitions_schema() {
    return {{"type", "object"},
            {"properties",
             {{"comp_name", string_prop("Company name")},
              {"end_date", string_prop("Range end, ISO date YYYY-MM-DD")},
              {"start_date", string_prop("Range start, ISO date YYYY-MM-DD")}}},
            {"required", {"comp_name", "end_date", "start_date"}},
            {"additionalProperties", false}};
}

json transcript_schema() {
    return {{"type", "object"},
            {"properties",
             {{"comp_name", string_prop("Company name")},
              {"period", string_prop("Fiscal period, e.g. FY2023Q2")}}},
            {"required", {"comp_name", "period"}},
            {"additionalProperties", false}};
}

std::vector<ToolSpec> build_specs() {
    std::vector<ToolSpec> specs;
    specs.push_back({"get_acquisitions", "Finds relevant M&A data", acquisitions_schema(),
                     StatementKind::Acquisitions});
    specs.push_back({"get_balancesheet_statement", "Retrieves relevant balance sheet statement",
                     statement_schema(), StatementKind::BalanceSheet});
    specs.push_back({"get_business_segments", "Retrieves relevant business segment revenue data",
                     statement_schema(), StatementKind::BusinessSegments});
    specs.push_back({"get_capital_structure", "Retrieves relevant capital structure data",
                     statement_schema(), StatementKind::CapitalStructure});
    specs.push_back({"get_cashflow_statement", "Retrieves relevant cash flow statement",
                     statement_schema(), StatementKind::CashFlow});
    specs.push_back({"get_earningscall_transcript", "Outputs relevant earnings call transcript",
                     transcript_schema(), StatementKind::Transcript});
    specs.push_back({"get_geographic_segments",
                     "Retrieves relevant geographic segment revenue data",
                     statement_schema(), StatementKind::GeographicSegments});
    specs.push_back({"get_income_statement", "Retrieves relevant income statement",
                     statement_schema(), StatementKind::Income});
    specs.push_back({"get_operating_metrics",
                     "Retrieves relevant operating metrics, including physical ones",
                     statement_schema(), StatementKind::OperatingMetrics});
    specs.push_back({"get_pension_plan", "Retrieves relevant pension plan data",
                     statement_schema(), StatementKind::PensionPlan});
    specs.push_back({"get_product_segments", "Retrieves relevant product segment revenue data",
                     statement_schema(), StatementKind::ProductSegments});
    return specs;
}

// Returns an error message naming the offending argument, or empty on success.
std::string validate_args(const ToolSpec& spec, const json& args) {
    if (!args.is_object()) return "arguments must be an object";
    const json& props = spec.input_schema.at("properties");
    for (const auto& [key, value] : args.items()) {
        if (!props.contains(key)) return "unexpected argument '" + key + "'";
        const std::string type = props.at(key).at("type").get<std::string>();
        if (type == "string" && !value.is_string())
            return "argument '" + key + "' must be a string";
        if (type == "integer" && !value.is_number_integer())
            return "argument '" + key + "' must be an integer";
    }
    for (const auto& req : spec.input_schema.at("required"))
        if (!args.contains(req.get<std::string>()))
            return "missing required argument '" + req.get<std::string>() + "'";

    if (args.contains("scale")) {
        if (!scale_from_name(args["scale"].get<std::string>()))
            return "argument 'scale' must be one of units, thousands, millions, billions";
    }
    if (args.contains("period")) {
        if (!parse_fiscal_period(args["period"].get<std::string>()))
            return "argument 'period' must look like FY2023 or FY2023Q2";
    }
    if (args.contains("num_periods")) {
        if (args["num_periods"].get<int64_t>() < 1)
            return "argument 'num_periods' must be at least 1";
    }
    for (const char* key : {"start_date", "end_date"}) {
        if (args.contains(key) && !is_valid_iso_date(args[key].get<std::string>()))
            return std::string("argument '") + key + "' must be a valid YYYY-MM-DD date";
    }
    if (args.contains("start_date") && args.contains("end_date") &&
        args["start_date"].get<std::string>() > args["end_date"].get<std::string>())
        return "argument 'start_date' must not be after 'end_date'";
    return "";
}

}  // namespace

ToolSuite::ToolSuite(Provider& provider, ToolSuiteOptions opts)
    : provider_(provider), opts_(opts), specs_(build_specs()) {}

json ToolSuite::list_tools_json() const {
    json tools = json::array();
    for (const auto& s : specs_) {
        tools.push_back({{"name", s.name},
                         {"description", s.description},
                         {"inputSchema", s.input_schema}});
    }
    return {{"tools", tools}};
}

ToolCallResult ToolSuite::call(const std::string& name, const json& args, RunLog* log,
                               const std::string& call_prefix, ClockFn clock) {
    if (!clock) clock = wall_clock();
    ToolCallRecord record;
    {
        std::lock_guard lock(mu_);
        record.call_id = call_prefix + "-" + std::to_string(++seq_);
    }
    record.tool = name;
    record.args = args;
    record.started_at = clock();

    ToolCallResult out;
    const ToolSpec* spec = nullptr;
    for (const auto& s : specs_)
        if (s.name == name) spec = &s;

    if (!spec) {
        out.status = CallStatus::UnknownTool;
        out.error_message = "Unknown tool: " + name;
        record.outcome = "unknown_tool";
        record.error_detail = out.error_message;
    } else if (std::string msg = validate_args(*spec, args); !msg.empty()) {
        out.status = CallStatus::InvalidArgs;
        out.error_message = "Invalid arguments for tool " + name + ": " + msg;
        record.outcome = "invalid_args";
        record.error_detail = out.error_message;
    } else if (opts_.max_periods_per_call > 0 && args.contains("num_periods") &&
               args["num_periods"].get<int64_t>() > opts_.max_periods_per_call) {
        out.status = CallStatus::InvalidArgs;
        out.error_message = "Invalid arguments for tool " + name +
                            ": argument 'num_periods' exceeds the per-call limit of " +
                            std::to_string(opts_.max_periods_per_call);
        record.outcome = "invalid_args";
        record.error_detail = out.error_message;
    } else {
        FetchWindow window;
        if (spec->kind == StatementKind::Acquisitions) {
            window.start_date = args["start_date"].get<std::string>();
            window.end_date = args["end_date"].get<std::string>();
        } else {
            window.period = args["period"].get<std::string>();
            if (args.contains("num_periods"))
                window.num_periods = static_cast<int>(args["num_periods"].get<int64_t>());
        }
        try {
            StatementTable table =
                provider_.fetch(spec->kind, args["comp_name"].get<std::string>(), window);
            if (args.contains("scale"))
                table = table.rescaled(*scale_from_name(args["scale"].get<std::string>()));
            out.status = CallStatus::Ok;
            out.content = {{"content", json::array({{{"type", "text"}, {"text", table.render_text()}}})},
                           {"structuredContent", table.to_json()},
                           {"isError", false}};
            record.outcome = "ok";
        } catch (const ProviderError& e) {
            out.status = CallStatus::ExecError;
            out.content = {{"content", json::array({{{"type", "text"},
                                                     {"text", std::string("Error: ") + e.what()}}})},
                           {"isError", true}};
            record.outcome = "exec_error";
            record.error_detail = e.what();
        } catch (const std::exception& e) {
            out.status = CallStatus::ExecError;
            out.content = {{"content", json::array({{{"type", "text"},
                                                     {"text", std::string("Error: ") + e.what()}}})},
                           {"isError", true}};
            record.outcome = "exec_error";
            record.error_detail = e.what();
        }
    }

    record.ended_at = clock();
    if (out.content.is_object()) record.result_digest = digest_hex(out.content.dump());
    if (log) log->append(record);
    return out;
}

}  // namespace finmcp
