#include "hsasim/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hsasim {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + " for checksum");
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 15];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    return h;
}

std::string fnv1a_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string now_utc_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec);
    return buf;
}

}  // namespace

void write_manifest(const RunManifest& manifest, const std::string& dir) {
    json j;
    j["command"] = manifest.command;
    j["argv"] = manifest.argv;
    j["parameters"] = manifest.parameters_json.empty()
                          ? json::object()
                          : json::parse(manifest.parameters_json);
    j["inputs"] = manifest.inputs;
    j["outputs"] = manifest.outputs;
    j["data_provenance"] = manifest.data_provenance;
    j["timestamp"] =
        manifest.timestamp.empty() ? now_utc_iso8601() : manifest.timestamp;
    j["checksum_algorithm"] = "fnv1a-64";

    fs::create_directories(dir);
    const fs::path final_path = fs::path(dir) / "manifest.json";
    const fs::path tmp_path = fs::path(dir) / ".manifest.json.tmp";
    {
        std::ofstream out(tmp_path);
        if (!out) throw std::runtime_error("cannot write " + tmp_path.string());
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("write failed: " + tmp_path.string());
    }
    fs::rename(tmp_path, final_path);
}

RunManifest read_manifest(const std::string& dir_or_file) {
    fs::path p(dir_or_file);
    if (fs::is_directory(p)) p /= "manifest.json";
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    const json j = json::parse(in);

    RunManifest m;
    m.command = j.at("command").get<std::string>();
    if (j.contains("argv")) m.argv = j.at("argv").get<std::vector<std::string>>();
    if (j.contains("parameters")) m.parameters_json = j.at("parameters").dump();
    if (j.contains("inputs"))
        m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    if (j.contains("outputs"))
        m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    if (j.contains("data_provenance"))
        m.data_provenance = j.at("data_provenance").get<std::string>();
    if (j.contains("timestamp")) m.timestamp = j.at("timestamp").get<std::string>();
    return m;
}

std::string provenance_of(const std::string& data_path) {
    const fs::path manifest =
        fs::path(data_path).parent_path() / "manifest.json";
    if (!fs::exists(manifest)) return "unspecified";
    try {
        return read_manifest(manifest.string()).data_provenance;
    } catch (const std::exception&) {
        return "unspecified";
    }
}

}  // namespace hsasim
