#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hhg/error.hpp"
#include "hhg/ingest/native.hpp"
#include "hhg/ingest/punch.hpp"
#include "hhg/molecule.hpp"

namespace hhg::ingest {

enum class MoleculeFormat { native, punch };

/// .json is native; .dat, .pun, .punch are GAMESS punch files.
inline MoleculeFormat format_from_path(const std::filesystem::path& path) {
    const auto ext = detail::upper(path.extension().string());
    if (ext == ".JSON") return MoleculeFormat::native;
    if (ext == ".DAT" || ext == ".PUN" || ext == ".PUNCH") return MoleculeFormat::punch;
    throw ConfigError("cannot tell molecule format from extension '" + path.extension().string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Molecule load_molecule(const std::filesystem::path& path, const PunchOptions& punch = {}) {
    const auto format = format_from_path(path);
    const std::string text = read_text_file(path);
    if (format == MoleculeFormat::native) return parse_native(text);
    PunchOptions opts = punch;
    if (opts.name.empty()) opts.name = path.stem().string();
    return parse_punch(split_punch(text, path.string()), opts);
}

}  // namespace hhg::ingest
