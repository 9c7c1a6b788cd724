#pragma once
// QA dataset loading, the five-step label cleanup, and corpus text statistics.

#include <nlohmann/json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace finmcp {

using json = nlohmann::json;

enum class DatasetErrc { MissingColumn, DuplicateId, BadValue, Io, EmptyLexicon };

struct DatasetError : std::runtime_error {
    DatasetErrc code;
    DatasetError(DatasetErrc c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline constexpr const char* kMissingAnswerFill = "No ground truth provided by the authors.";
inline constexpr const char* kNumericalGroup = "Numerical reasoning";

struct QARecord {
    std::string id;
    std::string question;
    std::string answer;
    std::vector<std::string> references;
    std::string category;
    std::string question_reasoning;  // fine type, one of seven labels
    bool reasoning = false;
    std::string reasoning_group;  // coarse type, one of three labels

    json to_json() const;
    bool operator==(const QARecord&) const = default;
};

// Counts of what each cleanup step touched plus post-step label tallies.
struct Reconciliation {
    size_t total = 0;
    size_t subtract_renamed = 0;
    size_t answers_filled = 0;
    size_t reasoning_flipped = 0;
    std::map<std::string, size_t> by_question_reasoning;
    std::map<std::string, size_t> by_reasoning_group;
    std::map<std::string, size_t> by_category;
    size_t reasoning_true = 0;
    size_t reasoning_false = 0;

    std::string render_text() const;
};

// Applies the five cleanup steps in order. Accepts both raw column names
// (text/type) and already-cleaned ones (question/question_reasoning), which
// makes the pass idempotent.
std::vector<QARecord> preprocess_records(const std::vector<json>& rows,
                                         Reconciliation* recon = nullptr);

std::vector<json> load_jsonl(const std::string& path);
std::vector<QARecord> load_and_preprocess(const std::string& path,
                                          Reconciliation* recon = nullptr);
void write_records_jsonl(const std::string& path, const std::vector<QARecord>& records);

// --- text statistics ---

// Maximal non-whitespace substrings.
std::vector<std::string> tokenize(const std::string& text);

// A token counts as a number when it still contains a decimal digit after
// stripping leading/trailing punctuation ("$1.2B." yes, "..." no).
bool is_number_token(const std::string& token);

size_t number_token_count(const std::string& text);

// number tokens / all tokens; empty text maps to 0.
double numeric_density(const std::string& text);

// Removes every literal "_X000D_" marker.
std::string strip_carriage_markers(const std::string& text);

std::vector<std::string> default_forward_lexicon();
std::vector<std::string> load_lexicon(const std::string& path);

// Case-insensitive whole-word matches, words being maximal alphanumeric runs.
size_t forward_word_count(const std::string& text, const std::vector<std::string>& lexicon);

struct BinEdges {
    size_t low = 10;   // upper edge of the first nonzero bin
    size_t mid = 50;   // upper edge of the middle bin
    size_t high = 100; // upper edge of the last bounded bin
};

// Buckets an answer by its number-token count: "0", "1-10", "11-50",
// "51-100", "101+" under default edges.
std::string number_occurrence_bin(const std::string& answer_text, BinEdges edges = {});
std::vector<std::string> bin_labels(BinEdges edges = {});

struct FieldStats {
    double avg_numeric_density = 0.0;
    double avg_forward_word_count = 0.0;
    size_t record_count = 0;
};

struct CorpusStats {
    // category -> field ("answer" | "references") -> stats
    std::map<std::string, std::map<std::string, FieldStats>> per_category;
    size_t total_records = 0;

    json to_json() const;
    static CorpusStats from_json(const json& j);
};

// Carriage markers are stripped from answers before measuring; references are
// measured over their joined text.
CorpusStats compute_corpus_stats(const std::vector<QARecord>& records,
                                 const std::vector<std::string>& lexicon);

}  // namespace finmcp
