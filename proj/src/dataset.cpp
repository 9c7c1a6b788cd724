#include "finmcp/dataset.hpp"

#include "finmcp/util.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace finmcp {

namespace {

const std::set<std::string> kNumericalFine = {"Addition", "Compositional", "Division",
                                              "Multiplication", "Subtraction"};
const std::set<std::string> kFineTypes = {"Information extraction",
                                          "Logical reasoning",
                                          "Addition",
                                          "Compositional",
                                          "Division",
                                          "Multiplication",
                                          "Subtraction"};
const std::set<std::string> kFlippedIds = {"8dc5ccdd", "2dba4bde"};

std::string pick_column(const json& row, const char* primary, const char* renamed) {
    if (row.contains(primary) && row[primary].is_string())
        return row[primary].get<std::string>();
    if (row.contains(renamed) && row[renamed].is_string())
        return row[renamed].get<std::string>();
    throw DatasetError(DatasetErrc::MissingColumn,
                       std::string("row missing column '") + primary + "'");
}

bool read_reasoning(const json& row) {
    if (!row.contains("reasoning"))
        throw DatasetError(DatasetErrc::MissingColumn, "row missing column 'reasoning'");
    const json& v = row["reasoning"];
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const std::string s = to_lower(v.get<std::string>());
        if (s == "true") return true;
        if (s == "false") return false;
    }
    throw DatasetError(DatasetErrc::BadValue, "column 'reasoning' must be a boolean");
}

}  // namespace

json QARecord::to_json() const {
    return {{"id", id},
            {"question", question},
            {"answer", answer},
            {"references", references},
            {"category", category},
            {"question_reasoning", question_reasoning},
            {"reasoning", reasoning},
            {"reasoning_group", reasoning_group}};
}

std::string Reconciliation::render_text() const {
    std::ostringstream out;
    out << "records: " << total << "\n";
    out << "step1 subtract renamed: " << subtract_renamed << "\n";
    out << "step2 answers filled: " << answers_filled << "\n";
    out << "step3 reasoning flipped: " << reasoning_flipped << "\n";
    out << "question_reasoning:\n";
    for (const auto& [label, n] : by_question_reasoning)
        out << "  " << label << ": " << n << "\n";
    out << "reasoning_group:\n";
    for (const auto& [label, n] : by_reasoning_group) out << "  " << label << ": " << n << "\n";
    out << "reasoning:\n";
    out << "  true: " << reasoning_true << "\n";
    out << "  false: " << reasoning_false << "\n";
    out << "category:\n";
    for (const auto& [label, n] : by_category) out << "  " << label << ": " << n << "\n";
    return out.str();
}

std::vector<QARecord> preprocess_records(const std::vector<json>& rows, Reconciliation* recon) {
    std::vector<QARecord> out;
    out.reserve(rows.size());
    Reconciliation r;
    std::set<std::string> seen;

    for (const json& row : rows) {
        if (!row.is_object())
            throw DatasetError(DatasetErrc::BadValue, "dataset row is not an object");
        QARecord rec;
        if (!row.contains("id") || !row["id"].is_string())
            throw DatasetError(DatasetErrc::MissingColumn, "row missing column 'id'");
        rec.id = row["id"].get<std::string>();
        if (!seen.insert(rec.id).second)
            throw DatasetError(DatasetErrc::DuplicateId, "duplicate id '" + rec.id + "'");

        rec.question = pick_column(row, "text", "question");
        rec.question_reasoning = pick_column(row, "type", "question_reasoning");
        if (!row.contains("category") || !row["category"].is_string())
            throw DatasetError(DatasetErrc::MissingColumn, "row missing column 'category'");
        rec.category = row["category"].get<std::string>();
        rec.answer = row.contains("answer") && row["answer"].is_string()
                         ? row["answer"].get<std::string>()
                         : "";
        for (const auto& ref : row.value("references", json::array()))
            rec.references.push_back(ref.get<std::string>());
        rec.reasoning = read_reasoning(row);

        // Step 1: stray "Subtract" label folds into "Subtraction".
        if (rec.question_reasoning == "Subtract") {
            rec.question_reasoning = "Subtraction";
            ++r.subtract_renamed;
        }
        if (!kFineTypes.count(rec.question_reasoning))
            throw DatasetError(DatasetErrc::BadValue,
                               "unknown question_reasoning '" + rec.question_reasoning + "'");
        // Step 2: missing ground truth gets the sentinel answer.
        if (rec.answer.empty()) {
            rec.answer = kMissingAnswerFill;
            ++r.answers_filled;
        }
        // Step 3: two specific rows belong in the reasoning category.
        if (kFlippedIds.count(rec.id) && !rec.reasoning) {
            rec.reasoning = true;
            ++r.reasoning_flipped;
        }
        // Step 4: coarse reasoning group.
        rec.reasoning_group =
            kNumericalFine.count(rec.question_reasoning) ? kNumericalGroup : rec.question_reasoning;
        // Step 5 (rename) is the column mapping applied on load.

        ++r.total;
        ++r.by_question_reasoning[rec.question_reasoning];
        ++r.by_reasoning_group[rec.reasoning_group];
        ++r.by_category[rec.category];
        (rec.reasoning ? r.reasoning_true : r.reasoning_false)++;
        out.push_back(std::move(rec));
    }
    if (recon) *recon = std::move(r);
    return out;
}

std::vector<json> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError(DatasetErrc::Io, "cannot open " + path);
    std::vector<json> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DatasetError(DatasetErrc::BadValue,
                               "invalid JSON on line " + std::to_string(rows.size() + 1));
        rows.push_back(std::move(j));
    }
    return rows;
}

std::vector<QARecord> load_and_preprocess(const std::string& path, Reconciliation* recon) {
    return preprocess_records(load_jsonl(path), recon);
}

void write_records_jsonl(const std::string& path, const std::vector<QARecord>& records) {
    std::ostringstream out;
    for (const auto& rec : records) out << rec.to_json().dump() << "\n";
    write_file_atomic(path, out.str());
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) tokens.push_back(text.substr(start, i - start));
    }
    return tokens;
}

bool is_number_token(const std::string& token) {
    size_t begin = 0, end = token.size();
    while (begin < end && std::ispunct(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && std::ispunct(static_cast<unsigned char>(token[end - 1]))) --end;
    for (size_t i = begin; i < end; ++i)
        if (std::isdigit(static_cast<unsigned char>(token[i]))) return true;
    return false;
}

size_t number_token_count(const std::string& text) {
    size_t n = 0;
    for (const auto& t : tokenize(text))
        if (is_number_token(t)) ++n;
    return n;
}

double numeric_density(const std::string& text) {
    const auto tokens = tokenize(text);
    if (tokens.empty()) return 0.0;
    size_t numbers = 0;
    for (const auto& t : tokens)
        if (is_number_token(t)) ++numbers;
    return static_cast<double>(numbers) / static_cast<double>(tokens.size());
}

std::string strip_carriage_markers(const std::string& text) {
    static const std::string kMarker = "_X000D_";
    std::string out;
    out.reserve(text.size());
    size_t pos = 0;
    for (;;) {
        size_t hit = text.find(kMarker, pos);
        if (hit == std::string::npos) {
            out.append(text, pos, text.size() - pos);
            return out;
        }
        out.append(text, pos, hit - pos);
        pos = hit + kMarker.size();
    }
}

std::vector<std::string> default_forward_lexicon() {
    return {
        "expect",      "expects",      "expected",     "expecting",   "expectation",
        "expectations","anticipate",   "anticipates",  "anticipated", "anticipating",
        "will",        "forecast",     "forecasts",    "forecasted",  "forecasting",
        "outlook",     "guidance",     "plan",         "plans",       "planned",
        "planning",    "intend",       "intends",      "intended",    "intending",
        "project",     "projects",     "projected",    "projecting",  "projection",
        "projections", "believe",      "believes",     "believed",    "believing",
    };
}

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError(DatasetErrc::Io, "cannot open lexicon " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        std::string w = trim(line);
        if (w.empty() || w[0] == '#') continue;
        words.push_back(to_lower(w));
    }
    return words;
}

size_t forward_word_count(const std::string& text, const std::vector<std::string>& lexicon) {
    if (lexicon.empty())
        throw DatasetError(DatasetErrc::EmptyLexicon, "forward-looking lexicon is empty");
    std::set<std::string> wanted;
    for (const auto& w : lexicon) wanted.insert(to_lower(w));

    size_t count = 0, i = 0;
    while (i < text.size()) {
        while (i < text.size() && !std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
        size_t start = i;
        while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start && wanted.count(to_lower(text.substr(start, i - start)))) ++count;
    }
    return count;
}

std::string number_occurrence_bin(const std::string& answer_text, BinEdges edges) {
    const size_t n = number_token_count(answer_text);
    if (n == 0) return "0";
    if (n <= edges.low) return "1-" + std::to_string(edges.low);
    if (n <= edges.mid)
        return std::to_string(edges.low + 1) + "-" + std::to_string(edges.mid);
    if (n <= edges.high)
        return std::to_string(edges.mid + 1) + "-" + std::to_string(edges.high);
    return std::to_string(edges.high + 1) + "+";
}

std::vector<std::string> bin_labels(BinEdges edges) {
    return {"0", "1-" + std::to_string(edges.low),
            std::to_string(edges.low + 1) + "-" + std::to_string(edges.mid),
            std::to_string(edges.mid + 1) + "-" + std::to_string(edges.high),
            std::to_string(edges.high + 1) + "+"};
}

json CorpusStats::to_json() const {
    json cats = json::object();
    for (const auto& [cat, fields] : per_category) {
        json f = json::object();
        for (const auto& [field, s] : fields)
            f[field] = {{"avg_numeric_density", s.avg_numeric_density},
                        {"avg_forward_word_count", s.avg_forward_word_count},
                        {"record_count", s.record_count}};
        cats[cat] = f;
    }
    return {{"categories", cats}, {"total_records", total_records}};
}

CorpusStats CorpusStats::from_json(const json& j) {
    CorpusStats s;
    s.total_records = j.value("total_records", size_t{0});
    // Named local: items() over a value() temporary dangles in a range-for.
    const json categories = j.value("categories", json::object());
    for (const auto& [cat, fields] : categories.items()) {
        for (const auto& [field, v] : fields.items()) {
            FieldStats fs;
            fs.avg_numeric_density = v.value("avg_numeric_density", 0.0);
            fs.avg_forward_word_count = v.value("avg_forward_word_count", 0.0);
            fs.record_count = v.value("record_count", size_t{0});
            s.per_category[cat][field] = fs;
        }
    }
    return s;
}

CorpusStats compute_corpus_stats(const std::vector<QARecord>& records,
                                 const std::vector<std::string>& lexicon) {
    struct Acc {
        double density = 0.0;
        double forward = 0.0;
        size_t n = 0;
    };
    std::map<std::string, std::map<std::string, Acc>> acc;

    for (const auto& rec : records) {
        const std::string answer = strip_carriage_markers(rec.answer);
        std::string refs;
        for (size_t i = 0; i < rec.references.size(); ++i) {
            if (i) refs += "\n";
            refs += rec.references[i];
        }
        auto& a = acc[rec.category]["answer"];
        a.density += numeric_density(answer);
        a.forward += static_cast<double>(forward_word_count(answer, lexicon));
        ++a.n;
        auto& f = acc[rec.category]["references"];
        f.density += numeric_density(refs);
        f.forward += static_cast<double>(forward_word_count(refs, lexicon));
        ++f.n;
    }

    CorpusStats stats;
    stats.total_records = records.size();
    for (const auto& [cat, fields] : acc)
        for (const auto& [field, a] : fields) {
            FieldStats s;
            s.record_count = a.n;
            if (a.n) {
                s.avg_numeric_density = a.density / static_cast<double>(a.n);
                s.avg_forward_word_count = a.forward / static_cast<double>(a.n);
            }
            stats.per_category[cat][field] = s;
        }
    return stats;
}

}  // namespace finmcp
