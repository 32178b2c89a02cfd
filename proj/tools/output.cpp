#include "output.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "plasmonqd/errors.hpp"

namespace plasmonqd::cli {

namespace fs = std::filesystem;

std::string format_cell(double v, bool boolean) {
    if (boolean) return v != 0.0 ? "true" : "false";
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string render_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c].name;
    out += "\n";
    for (const auto& row : t.rows) {
        if (row.size() != t.columns.size()) throw std::logic_error("row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_cell(row[c], t.columns[c].boolean);
        out += "\n";
    }
    return out;
}

nlohmann::json render_json(const Table& t) {
    nlohmann::json cols = nlohmann::json::array(), rows = nlohmann::json::array();
    for (const auto& c : t.columns) cols.push_back(c.name);
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (t.columns[c].boolean)
                r.push_back(row[c] != 0.0);
            else if (std::isfinite(row[c]))
                r.push_back(row[c]);
            else
                r.push_back(nullptr);
        }
        rows.push_back(std::move(r));
    }
    return {{"columns", cols}, {"rows", rows}};
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

OutputDir::OutputDir(fs::path dir, Format format) : dir_(std::move(dir)), format_(format) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw InvalidParams("cannot create output directory " + dir_.string() + ": " + ec.message());
    if (fs::exists(dir_ / "manifest.json")) fs::remove(dir_ / "manifest.json");
}

OutputDir::~OutputDir() {
    if (!finished_) discard();
}

void OutputDir::write_file(const std::string& name, const std::string& bytes, nlohmann::json meta) {
    const fs::path p = dir_ / name;
    {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidParams("cannot write " + p.string());
        written_.push_back(p);
        out << bytes;
        if (!out) throw InvalidParams("write failed for " + p.string());
    }
    files_.push_back({{"path", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}, {"meta", std::move(meta)}});
}

void OutputDir::write_table(const std::string& stem, const Table& table, nlohmann::json meta) {
    if (format_ == Format::csv)
        write_file(stem + ".csv", render_csv(table), std::move(meta));
    else
        write_file(stem + ".json", render_json(table).dump(1) + "\n", std::move(meta));
}

void OutputDir::write_json(const std::string& name, const nlohmann::json& doc, nlohmann::json meta) {
    write_file(name, doc.dump(1) + "\n", std::move(meta));
}

void OutputDir::finish(const nlohmann::json& header) {
    nlohmann::json m = header;
    m["files"] = files_;
    m["warnings"] = warnings_;
    const fs::path tmp = dir_ / "manifest.json.tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidParams("cannot write " + tmp.string());
        out << m.dump(1) << "\n";
    }
    fs::rename(tmp, dir_ / "manifest.json");
    finished_ = true;
}

void OutputDir::discard() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    fs::remove(dir_ / "manifest.json.tmp", ec);
    written_.clear();
    files_ = nlohmann::json::array();
}

}  // namespace plasmonqd::cli
