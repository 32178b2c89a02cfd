#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace plasmonqd::cli {

struct Column {
    std::string name;
    bool boolean = false;
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;  // NaN marks a missing value
};

// CSV cells: 17 significant digits in scientific notation, "nan" for missing values
std::string format_cell(double v, bool boolean);
std::string render_csv(const Table& t);
nlohmann::json render_json(const Table& t);

std::string sha256_hex(const std::string& bytes);

// One output directory per run. Files are written as they are produced; the
// manifest goes last via rename. Anything written is removed again if the run
// does not reach finish().
class OutputDir {
public:
    OutputDir(std::filesystem::path dir, Format format);
    ~OutputDir();
    OutputDir(const OutputDir&) = delete;
    OutputDir& operator=(const OutputDir&) = delete;

    // stem without extension; extension follows the format
    void write_table(const std::string& stem, const Table& table, nlohmann::json meta = nlohmann::json::object());
    void write_json(const std::string& name, const nlohmann::json& doc, nlohmann::json meta = nlohmann::json::object());
    void warn(const std::string& msg) { warnings_.push_back(msg); }
    const std::vector<std::string>& warnings() const { return warnings_; }

    void finish(const nlohmann::json& header);
    void discard();

    const std::filesystem::path& dir() const { return dir_; }

private:
    void write_file(const std::string& name, const std::string& bytes, nlohmann::json meta);

    std::filesystem::path dir_;
    Format format_;
    nlohmann::json files_ = nlohmann::json::array();
    std::vector<std::filesystem::path> written_;
    std::vector<std::string> warnings_;
    bool finished_ = false;
};

}  // namespace plasmonqd::cli
