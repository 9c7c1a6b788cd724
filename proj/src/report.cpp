#include "finmcp/report.hpp"

#include "finmcp/chart.hpp"
#include "finmcp/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace finmcp {

namespace {

std::string fmt_ratio(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string fmt_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string opt_ratio(const std::optional<double>& v) { return v ? fmt_ratio(*v) : ""; }

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string csv_escape(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

void write_table(const fs::path& out_dir, const Table& t, const std::string& format) {
    std::ostringstream out;
    if (format == "md") {
        out << "| ";
        for (size_t i = 0; i < t.header.size(); ++i) out << t.header[i] << " |" << (i + 1 < t.header.size() ? " " : "");
        out << "\n|";
        for (size_t i = 0; i < t.header.size(); ++i) out << " --- |";
        out << "\n";
        for (const auto& row : t.rows) {
            out << "| ";
            for (size_t i = 0; i < row.size(); ++i) out << row[i] << " |" << (i + 1 < row.size() ? " " : "");
            out << "\n";
        }
        write_file_atomic((out_dir / (t.name + ".md")).string(), out.str());
    } else {
        for (size_t i = 0; i < t.header.size(); ++i) {
            if (i) out << ",";
            out << csv_escape(t.header[i]);
        }
        out << "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out << ",";
                out << csv_escape(row[i]);
            }
            out << "\n";
        }
        write_file_atomic((out_dir / (t.name + ".csv")).string(), out.str());
    }
}

void write_chart(const fs::path& out_dir, const std::string& stem, const ChartSpec& spec) {
    write_file_atomic((out_dir / (stem + ".svg")).string(), render_grouped_bar_svg(spec));
}

// Aggregate tables share one layout: group columns then counts and means.
Table aggregate_table(const std::string& name, const std::vector<GroupKey>& keys,
                      const std::vector<AggregateRow>& rows) {
    Table t;
    t.name = name;
    for (const auto& k : keys) t.header.push_back(group_key_name(k));
    for (const char* col : {"n", "n_accuracy", "mean_accuracy", "n_context_relevance",
                            "mean_context_relevance", "n_groundedness", "mean_groundedness",
                            "small_sample"})
        t.header.push_back(col);
    for (const auto& r : rows) {
        std::vector<std::string> row = r.group;
        row.push_back(std::to_string(r.n));
        row.push_back(std::to_string(r.n_accuracy));
        row.push_back(opt_ratio(r.mean_accuracy));
        row.push_back(std::to_string(r.n_context_relevance));
        row.push_back(opt_ratio(r.mean_context_relevance));
        row.push_back(std::to_string(r.n_groundedness));
        row.push_back(opt_ratio(r.mean_groundedness));
        row.push_back(r.small_sample ? "yes" : "no");
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Chart with one group per aggregate row, three metric series.
ChartSpec aggregate_chart(const std::string& title, const std::vector<AggregateRow>& rows) {
    ChartSpec spec;
    spec.title = title;
    spec.y_label = "mean score";
    spec.y_max = 1.0;
    ChartSeries acc{"Answer Accuracy", {}}, cr{"Context Relevance", {}},
        rg{"Response Groundedness", {}};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& r : rows) {
        std::string label;
        for (size_t i = 0; i < r.group.size(); ++i) {
            if (i) label += " / ";
            label += r.group[i];
        }
        spec.groups.push_back(label);
        acc.values.push_back(r.mean_accuracy ? *r.mean_accuracy : nan);
        cr.values.push_back(r.mean_context_relevance ? *r.mean_context_relevance : nan);
        rg.values.push_back(r.mean_groundedness ? *r.mean_groundedness : nan);
    }
    spec.series = {acc, cr, rg};
    return spec;
}

struct SummaryLine {
    std::string statistic;
    std::string run_value;
    std::string baseline_value;
};

}  // namespace

std::vector<JoinedRow> join_results(const std::vector<QARecord>& dataset,
                                    const std::vector<EvalResult>& evals) {
    std::map<std::string, const EvalResult*> by_id;
    for (const auto& e : evals) by_id[e.question_id] = &e;
    if (by_id.size() != evals.size())
        throw std::runtime_error("join mismatch: duplicate question_id in eval results");

    std::vector<JoinedRow> rows;
    std::set<std::string> seen;
    for (const auto& rec : dataset) {
        auto it = by_id.find(rec.id);
        if (it == by_id.end())
            throw std::runtime_error("join mismatch: no eval result for " + rec.id);
        rows.push_back({&rec, it->second});
        seen.insert(rec.id);
    }
    for (const auto& e : evals)
        if (!seen.count(e.question_id))
            throw std::runtime_error("join mismatch: no dataset record for " + e.question_id);
    return rows;
}

std::string group_key_name(GroupKey key) {
    switch (key) {
        case GroupKey::Category: return "category";
        case GroupKey::CategorySplit: return "category_split";
        case GroupKey::ContextQuality: return "context_quality";
        case GroupKey::ReasoningGroup: return "reasoning_group";
        case GroupKey::FineType: return "question_reasoning";
        case GroupKey::NumberBin: return "number_bin";
    }
    return "?";
}

std::string group_value(GroupKey key, const JoinedRow& row) {
    switch (key) {
        case GroupKey::Category:
            return row.record->category;
        case GroupKey::CategorySplit:
            return row.record->category == "Financials" ? "Financials" : "Other";
        case GroupKey::ContextQuality:
            if (!row.eval->context_relevance) return "Unscored";
            return *row.eval->context_relevance >= kHighQualityThreshold ? "High-quality"
                                                                         : "Low-quality";
        case GroupKey::ReasoningGroup:
            return row.record->reasoning_group;
        case GroupKey::FineType:
            return row.record->question_reasoning;
        case GroupKey::NumberBin:
            return number_occurrence_bin(strip_carriage_markers(row.record->answer));
    }
    return "?";
}

std::vector<AggregateRow> aggregate(const std::vector<JoinedRow>& rows,
                                    const std::vector<GroupKey>& keys, size_t n_floor) {
    struct Acc {
        size_t n = 0;
        double sum_acc = 0, sum_cr = 0, sum_rg = 0;
        size_t n_acc = 0, n_cr = 0, n_rg = 0;
    };
    std::map<std::vector<std::string>, Acc> groups;

    for (const auto& row : rows) {
        std::vector<std::string> g;
        g.reserve(keys.size());
        for (const auto& k : keys) g.push_back(group_value(k, row));
        Acc& a = groups[g];
        ++a.n;
        if (row.eval->answer_accuracy && !row.eval->accuracy_excluded) {
            a.sum_acc += *row.eval->answer_accuracy;
            ++a.n_acc;
        }
        if (row.eval->context_relevance) {
            a.sum_cr += *row.eval->context_relevance;
            ++a.n_cr;
        }
        if (row.eval->response_groundedness) {
            a.sum_rg += *row.eval->response_groundedness;
            ++a.n_rg;
        }
    }

    std::vector<AggregateRow> out;
    for (const auto& [g, a] : groups) {
        AggregateRow r;
        r.group = g;
        r.n = a.n;
        r.n_accuracy = a.n_acc;
        r.n_context_relevance = a.n_cr;
        r.n_groundedness = a.n_rg;
        if (a.n_acc) r.mean_accuracy = a.sum_acc / static_cast<double>(a.n_acc);
        if (a.n_cr) r.mean_context_relevance = a.sum_cr / static_cast<double>(a.n_cr);
        if (a.n_rg) r.mean_groundedness = a.sum_rg / static_cast<double>(a.n_rg);
        r.small_sample = a.n < n_floor;
        out.push_back(std::move(r));
    }
    return out;
}

void emit_report(const std::vector<QARecord>& dataset, const std::vector<EvalResult>& evals,
                 const CorpusStats& stats, const std::string& out_dir,
                 const ReportOptions& opts) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir))
        throw std::runtime_error("cannot create output directory " + out_dir);
    const fs::path dir = out_dir;

    const auto joined = join_results(dataset, evals);

    // density and forward-word tables over corpus stats
    {
        Table density{"fig2_numeric_density",
                      {"category", "answer_avg_density", "references_avg_density", "n"},
                      {}};
        Table forward{"fig3_forward_words",
                      {"category", "answer_avg_count", "references_avg_count", "n"},
                      {}};
        ChartSpec dspec, fspec;
        dspec.title = "Average numeric density by category";
        dspec.y_label = "avg density";
        fspec.title = "Average forward-looking word count by category";
        fspec.y_label = "avg count";
        ChartSeries d_ans{"Answer", {}}, d_ref{"References", {}};
        ChartSeries f_ans{"Answer", {}}, f_ref{"References", {}};
        for (const auto& [cat, fields] : stats.per_category) {
            const FieldStats& ans = fields.at("answer");
            const FieldStats& ref = fields.at("references");
            density.rows.push_back({cat, fmt_ratio(ans.avg_numeric_density),
                                    fmt_ratio(ref.avg_numeric_density),
                                    std::to_string(ans.record_count)});
            forward.rows.push_back({cat, fmt_ratio(ans.avg_forward_word_count),
                                    fmt_ratio(ref.avg_forward_word_count),
                                    std::to_string(ans.record_count)});
            dspec.groups.push_back(cat);
            fspec.groups.push_back(cat);
            d_ans.values.push_back(ans.avg_numeric_density);
            d_ref.values.push_back(ref.avg_numeric_density);
            f_ans.values.push_back(ans.avg_forward_word_count);
            f_ref.values.push_back(ref.avg_forward_word_count);
        }
        dspec.series = {d_ans, d_ref};
        fspec.series = {f_ans, f_ref};
        write_table(dir, density, opts.format);
        write_table(dir, forward, opts.format);
        write_chart(dir, "fig2_numeric_density", dspec);
        write_chart(dir, "fig3_forward_words", fspec);
    }

    auto emit_agg = [&](const std::string& stem, const std::string& title,
                        const std::vector<JoinedRow>& rows,
                        const std::vector<GroupKey>& keys) {
        auto agg = aggregate(rows, keys, opts.n_floor);
        write_table(dir, aggregate_table(stem, keys, agg), opts.format);
        write_chart(dir, stem, aggregate_chart(title, agg));
        return agg;
    };

    std::vector<JoinedRow> financials;
    for (const auto& row : joined)
        if (row.record->category == "Financials") financials.push_back(row);

    const auto by_split =
        emit_agg("fig4_by_category", "Performance by question category", joined,
                 {GroupKey::CategorySplit});
    const auto by_quality =
        emit_agg("fig5_by_quality_and_category",
                 "Performance by context quality and question category", joined,
                 {GroupKey::ContextQuality, GroupKey::CategorySplit});
    const auto by_task =
        emit_agg("fig6_financials_by_quality_and_task",
                 "Financials performance by context quality and task type", financials,
                 {GroupKey::ContextQuality, GroupKey::ReasoningGroup});
    emit_agg("fig7_financials_by_number_bin",
             "Financials performance by number occurrences and task type", financials,
             {GroupKey::NumberBin, GroupKey::ReasoningGroup});

    // high-quality counts next to accuracy, per category
    {
        Table t{"figA1_quality_counts",
                {"category", "n", "high_quality_count", "mean_accuracy"},
                {}};
        ChartSpec spec;
        spec.title = "High-quality answer count and accuracy by category";
        spec.y_label = "count / score";
        ChartSeries counts{"High-quality count", {}};
        std::map<std::string, size_t> total, high;
        for (const auto& row : joined) {
            ++total[row.record->category];
            if (row.eval->high_quality) ++high[row.record->category];
        }
        auto acc_by_cat = aggregate(joined, {GroupKey::Category}, opts.n_floor);
        for (const auto& r : acc_by_cat) {
            const std::string& cat = r.group[0];
            t.rows.push_back({cat, std::to_string(total[cat]), std::to_string(high[cat]),
                              opt_ratio(r.mean_accuracy)});
            spec.groups.push_back(cat);
            counts.values.push_back(static_cast<double>(high[cat]));
        }
        spec.series = {counts};
        write_table(dir, t, opts.format);
        write_chart(dir, "figA1_quality_counts", spec);
    }

    // lattice-level score distribution per category
    {
        const std::vector<double> levels = {0.0, 0.25, 0.5, 0.75, 1.0};
        Table t{"figA2_score_distribution",
                {"category", "metric", "0", "0.25", "0.5", "0.75", "1", "unscored"},
                {}};
        std::map<std::string, std::map<std::string, std::vector<size_t>>> counts;
        for (const auto& row : joined) {
            for (const char* metric : {"context_relevance", "response_groundedness"}) {
                auto& c = counts[row.record->category][metric];
                if (c.empty()) c.assign(levels.size() + 1, 0);
                const auto& score = std::string(metric) == "context_relevance"
                                        ? row.eval->context_relevance
                                        : row.eval->response_groundedness;
                if (!score) {
                    ++c.back();
                    continue;
                }
                for (size_t i = 0; i < levels.size(); ++i)
                    if (std::fabs(*score - levels[i]) < 1e-9) {
                        ++c[i];
                        break;
                    }
            }
        }
        ChartSpec spec;
        spec.title = "Scored answer count by category";
        spec.y_label = "count";
        ChartSeries cr{"Context Relevance", {}}, rg{"Response Groundedness", {}};
        for (const auto& [cat, metrics] : counts) {
            for (const auto& [metric, c] : metrics) {
                std::vector<std::string> row = {cat, metric};
                for (size_t i = 0; i < levels.size(); ++i) row.push_back(std::to_string(c[i]));
                row.push_back(std::to_string(c.back()));
                t.rows.push_back(std::move(row));
            }
            spec.groups.push_back(cat);
            size_t cr_n = 0, rg_n = 0;
            const auto& cc = metrics.at("context_relevance");
            const auto& gc = metrics.at("response_groundedness");
            for (size_t i = 0; i + 1 < cc.size(); ++i) cr_n += cc[i];
            for (size_t i = 0; i + 1 < gc.size(); ++i) rg_n += gc[i];
            cr.values.push_back(static_cast<double>(cr_n));
            rg.values.push_back(static_cast<double>(rg_n));
        }
        spec.series = {cr, rg};
        write_table(dir, t, opts.format);
        write_chart(dir, "figA2_score_distribution", spec);
    }

    emit_agg("figA3_scores_by_number_bin",
             "Context relevance and groundedness by number occurrences", joined,
             {GroupKey::NumberBin, GroupKey::CategorySplit});

    // headline summary: run values beside the published baseline numbers
    {
        auto find_row = [](const std::vector<AggregateRow>& rows,
                           const std::vector<std::string>& group) -> const AggregateRow* {
            for (const auto& r : rows)
                if (r.group == group) return &r;
            return nullptr;
        };
        auto pct_of = [&](const std::vector<AggregateRow>& rows,
                          const std::vector<std::string>& group,
                          auto field) -> std::string {
            const AggregateRow* r = find_row(rows, group);
            if (!r) return "";
            const auto& v = field(*r);
            return v ? fmt_pct(*v * 100.0) : "";
        };
        auto n_of = [&](const std::vector<AggregateRow>& rows,
                        const std::vector<std::string>& group) -> std::string {
            const AggregateRow* r = find_row(rows, group);
            return r ? std::to_string(r->n) : "0";
        };
        auto acc = [](const AggregateRow& r) { return r.mean_accuracy; };
        auto cr = [](const AggregateRow& r) { return r.mean_context_relevance; };
        auto rg = [](const AggregateRow& r) { return r.mean_groundedness; };

        const auto fine_high = aggregate(financials, {GroupKey::ContextQuality, GroupKey::FineType},
                                         opts.n_floor);
        const auto fine_all = aggregate(financials, {GroupKey::FineType}, opts.n_floor);
        const auto task_all = aggregate(financials, {GroupKey::ReasoningGroup}, opts.n_floor);

        size_t subtraction = 0, reasoning_true = 0;
        for (const auto& rec : dataset) {
            if (rec.question_reasoning == "Subtraction") ++subtraction;
            if (rec.reasoning) ++reasoning_true;
        }
        size_t n_fin = 0;
        for (const auto& row : joined)
            if (row.record->category == "Financials") ++n_fin;

        std::vector<SummaryLine> lines = {
            {"answer_accuracy_financials_pct",
             pct_of(by_split, {"Financials"}, acc), "69.7"},
            {"answer_accuracy_other_pct", pct_of(by_split, {"Other"}, acc), "50.0"},
            {"answer_accuracy_financials_high_quality_pct",
             pct_of(by_quality, {"High-quality", "Financials"}, acc), "73.8"},
            {"answer_accuracy_other_high_quality_pct",
             pct_of(by_quality, {"High-quality", "Other"}, acc), "47.6"},
            {"answer_accuracy_numerical_high_quality_pct",
             pct_of(by_task, {"High-quality", "Numerical reasoning"}, acc), "75.3"},
            {"answer_accuracy_compositional_high_quality_pct",
             pct_of(fine_high, {"High-quality", "Compositional"}, acc), "80.4"},
            {"context_relevance_financials_pct", pct_of(by_split, {"Financials"}, cr), "72.5"},
            {"context_relevance_other_pct", pct_of(by_split, {"Other"}, cr), "20.5"},
            {"response_groundedness_financials_pct",
             pct_of(by_split, {"Financials"}, rg), "90.4"},
            {"response_groundedness_other_pct", pct_of(by_split, {"Other"}, rg), "69.7"},
            {"count_total", std::to_string(dataset.size()), "5703"},
            {"count_financials", std::to_string(n_fin), "990"},
            {"count_other", std::to_string(dataset.size() - n_fin), "4713"},
            {"count_financials_high_quality",
             n_of(by_quality, {"High-quality", "Financials"}), "668"},
            {"count_financials_low_quality",
             n_of(by_quality, {"Low-quality", "Financials"}), "322"},
            {"count_other_high_quality", n_of(by_quality, {"High-quality", "Other"}), "636"},
            {"count_other_low_quality", n_of(by_quality, {"Low-quality", "Other"}), "4077"},
            {"count_numerical_high_quality",
             n_of(by_task, {"High-quality", "Numerical reasoning"}), "433"},
            {"count_numerical_financials", n_of(task_all, {"Numerical reasoning"}), "577"},
            {"count_compositional_high_quality",
             n_of(fine_high, {"High-quality", "Compositional"}), "204"},
            {"count_compositional_financials", n_of(fine_all, {"Compositional"}), "277"},
            {"count_subtraction", std::to_string(subtraction), "119"},
            {"count_reasoning_true", std::to_string(reasoning_true), "883"},
        };

        Table t{"summary", {"statistic", "run_value", "baseline_value"}, {}};
        json j = json::array();
        for (const auto& line : lines) {
            t.rows.push_back({line.statistic, line.run_value, line.baseline_value});
            j.push_back({{"statistic", line.statistic},
                         {"run_value", line.run_value},
                         {"baseline_value", line.baseline_value}});
        }
        write_table(dir, t, opts.format);
        write_file_atomic((dir / "summary.json").string(), j.dump(2) + "\n");
    }
}

}  // namespace finmcp
