#pragma once

#include <openssl/evp.h>

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hhg/error.hpp"
#include "hhg/ingest.hpp"
#include "hhg/version.hpp"

namespace hhg::app {

/// Git blob id: SHA-1 of "blob <size>\0" followed by the content.
inline std::string git_blob_digest(std::string_view content) {
    const std::string header = "blob " + std::to_string(content.size()) + '\0';
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx) throw Error("cannot allocate digest context");
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw Error("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& text) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out) throw Error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

/// Collects outputs, input digests and stage timings for one run directory.
class Manifest {
  public:
    using json = nlohmann::json;
    using clock = std::chrono::steady_clock;

    explicit Manifest(std::filesystem::path dir) : dir_(std::move(dir)), start_(clock::now()) {
        doc_["library"] = {{"name", "hhg"}, {"version", version}};
        doc_["status"] = "running";
        doc_["files"] = json::array();
        doc_["inputs"] = json::array();
        doc_["stages"] = json::array();
    }

    const std::filesystem::path& dir() const { return dir_; }

    void set(const std::string& key, json value) { doc_[key] = std::move(value); }

    void add_input(const std::string& role, const std::filesystem::path& path) {
        const std::string text = ingest::read_text_file(path);
        doc_["inputs"].push_back(
            {{"role", role}, {"path", path.string()}, {"bytes", text.size()}, {"digest", git_blob_digest(text)}});
    }

    /// Writes a file into the run directory and records it.
    void write_file(const std::string& name, const std::string& text) {
        const auto path = dir_ / name;
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            out << text;
            if (!out) throw Error("cannot write " + path.string());
        }
        doc_["files"].push_back({{"name", name}, {"bytes", text.size()}, {"digest", git_blob_digest(text)}});
    }

    template <class Fn>
    auto stage(const std::string& name, Fn&& fn) {
        current_ = name;
        const auto t0 = clock::now();
        std::fprintf(stderr, "[hhg] %s ...\n", name.c_str());
        auto finish = [&] {
            const double secs = std::chrono::duration<double>(clock::now() - t0).count();
            doc_["stages"].push_back({{"name", name}, {"seconds", secs}});
            std::fprintf(stderr, "[hhg] %s done in %.2f s\n", name.c_str(), secs);
            current_.clear();
        };
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto r = fn();
            finish();
            return r;
        }
    }

    const std::string& current_stage() const { return current_; }

    void finish_ok() { finish("ok", {}); }

    void finish_failed(const std::string& stage, const std::string& message, int exit_code) {
        finish("failed", {{"stage", stage}, {"message", message}, {"exit_code", exit_code}});
    }

    const json& document() const { return doc_; }

  private:
    void finish(const std::string& status, json failure) {
        doc_["status"] = status;
        if (!failure.is_null()) doc_["failure"] = std::move(failure);
        doc_["wall_seconds"] = std::chrono::duration<double>(clock::now() - start_).count();
        write_atomically(dir_ / "manifest.json", doc_.dump(2) + "\n");
    }

    std::filesystem::path dir_;
    clock::time_point start_;
    json doc_;
    std::string current_;
};

}  // namespace hhg::app
