#pragma once
// Shared glue for the unit suite: repo-relative paths and scratch dirs.

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Repo root; ctest exports FINMCP_SOURCE_DIR, manual runs fall back to cwd.
inline std::string source_dir() {
    const char* env = std::getenv("FINMCP_SOURCE_DIR");
    return env && *env ? std::string(env) : std::string(".");
}

inline std::string fixtures_dir() { return source_dir() + "/fixtures"; }
inline std::string testdata_dir() { return source_dir() + "/testdata"; }

// Fresh scratch directory, removed when the guard leaves scope.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        for (;;) {
            auto candidate = base / ("finmcp-test-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
