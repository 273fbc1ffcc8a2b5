#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hsasim {

// FNV-1a over a file's bytes; the checksum recorded in run manifests.
std::uint64_t fnv1a_file(const std::string& path);
std::string fnv1a_hex(std::uint64_t h);

// Written next to every command's outputs. Records enough to re-run the
// command and check that inputs and outputs are the same bytes.
struct RunManifest {
    std::string command;                       // subcommand name
    std::vector<std::string> argv;             // full invocation
    std::string parameters_json;               // resolved parameters, as JSON text
    std::map<std::string, std::string> inputs;   // path -> fnv1a hex
    std::map<std::string, std::string> outputs;  // path -> fnv1a hex
    std::string data_provenance = "unspecified";  // e.g. "synthetic"
    std::string timestamp;                     // ISO-8601 UTC
};

// Serializes and writes atomically (temp file + rename) as
// <dir>/manifest.json.
void write_manifest(const RunManifest& manifest, const std::string& dir);

// Loads <dir>/manifest.json; also accepts a direct file path.
RunManifest read_manifest(const std::string& dir_or_file);

// Looks for the manifest describing a data file (the manifest of the
// directory that contains it) and returns its provenance, or
// "unspecified" when no manifest is found.
std::string provenance_of(const std::string& data_path);

}  // namespace hsasim
