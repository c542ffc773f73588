#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "plotdig-test")
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path()
            / (tag + "-" + std::to_string(rd()) + "-" + std::to_string(next_id()));
        std::filesystem::create_directories(path_);
    }

    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    static int next_id()
    {
        static int counter = 0;
        return counter++;
    }

    std::filesystem::path path_;
};

}  // namespace testutil
