#pragma once

#include <atomic>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "cubres/postproc.hpp"

// Run orchestration. Work is partitioned into y-chunks; each worker owns a
// chunk exclusively and produces the chunk's record block; the writer emits
// blocks strictly in chunk order, so any worker count yields byte-identical
// output. Completed chunks are checkpointed ("chunk <index> done <count>")
// and summarized in a manifest that is rewritten atomically; a rerun resumes
// from the manifest and a completed run is a no-op.

namespace cubres {

inline u64 fnv1a(const std::string& s, u64 h = 1469598103934665603ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct ChunkSummary {
    u64 index = 0;
    u64 count = 0;  // candidates in chunk
    u64 survivors = 0;
    u64 digest = 0;  // fnv over the chunk's record lines
    u64 rec_bytes = 0, sur_bytes = 0;
    u64 counts_by_disposition[5] = {0, 0, 0, 0, 0};
};

struct RunSummary {
    u64 candidates = 0;
    u64 survivors = 0;
    u64 stream_digest = 0;  // fold of chunk digests in chunk order
    u64 counts_by_disposition[5] = {0, 0, 0, 0, 0};
    u64 chunks = 0;
    u64 chunks_reused = 0;
    bool resumed = false;
};

namespace detail {

struct ChunkBlock {
    ChunkSummary summary;
    std::string records;  // newline-terminated record lines
    std::string survivor_lines;
};

inline ChunkBlock process_chunk(const SieveConfig& cfg, const WheelPlan& plan,
                                const PostProcessor& post, u64 index, u64 y_lo, u64 y_hi) {
    ChunkBlock blk;
    blk.summary.index = index;
    blk.summary.digest = 1469598103934665603ull;
    enumerate_y_range(cfg, plan, y_lo, y_hi, [&](const Candidate& c) {
        PrimeRep rep{c.f, c.x, c.y};
        CandidateRecord rec = post.process(rep);
        std::string line = rec.line();
        line += '\n';
        blk.summary.digest = fnv1a(line, blk.summary.digest);
        ++blk.summary.count;
        ++blk.summary.counts_by_disposition[int(rec.disposition)];
        blk.records += line;
        if (rec.disposition == Disposition::Survivor) {
            ++blk.summary.survivors;
            blk.survivor_lines += line;
        }
    });
    blk.summary.rec_bytes = blk.records.size();
    blk.summary.sur_bytes = blk.survivor_lines.size();
    return blk;
}

}  // namespace detail

class SieveRunner {
  public:
    SieveRunner(SieveConfig cfg, std::string outdir, bool write_records = false)
        : cfg_(std::move(cfg)), outdir_(std::move(outdir)), write_records_(write_records) {
        cfg_.validate();
        std::filesystem::create_directories(outdir_);
    }

    std::string manifest_path() const { return outdir_ + "/manifest.json"; }
    std::string checkpoint_path() const { return outdir_ + "/checkpoint.txt"; }
    std::string survivors_path() const { return outdir_ + "/survivors.txt"; }
    std::string records_path() const { return outdir_ + "/records.txt"; }

    RunSummary run() {
        const u64 y_max = cfg_.b2 <= 243 ? 0 : sieve_y_max(cfg_.b2);
        const u64 n_chunks = y_max == 0 ? 0 : (y_max + cfg_.chunk - 1) / cfg_.chunk;

        std::map<u64, ChunkSummary> done = load_done_chunks();
        RunSummary sum;
        sum.resumed = !done.empty();
        sum.chunks = n_chunks;

        SymbolTableSet tables(cfg_.table_bound);
        WheelPlan plan(cfg_, tables);
        PostProcessor post(tables, cfg_.wheel_primes());

        // Keep only the contiguous done-prefix; truncate outputs behind it.
        u64 rec_bytes = 0, sur_bytes = 0, prefix = 0;
        while (done.count(prefix)) {
            rec_bytes += done.at(prefix).rec_bytes;
            sur_bytes += done.at(prefix).sur_bytes;
            ++prefix;
        }
        done.erase(done.upper_bound(prefix == 0 ? 0 : prefix - 1), done.end());
        if (prefix == 0) done.clear();
        sum.chunks_reused = done.size();

        std::ofstream recf, surf, ckpt;
        if (write_records_) {
            prepare_truncated(records_path(), rec_bytes);
            recf.open(records_path(), std::ios::app);
        }
        prepare_truncated(survivors_path(), sur_bytes);
        surf.open(survivors_path(), std::ios::app);
        ckpt.open(checkpoint_path(), std::ios::trunc);
        for (u64 i = 0; i < prefix; ++i) {
            ckpt << "chunk " << i << " done " << done.at(i).count << "\n";
        }
        ckpt << std::flush;

        std::mutex mu;
        std::condition_variable cv;
        std::map<u64, detail::ChunkBlock> ready;
        std::atomic<u64> next_chunk{0};
        std::exception_ptr worker_error;

        auto worker = [&] {
            try {
                for (;;) {
                    u64 i = next_chunk.fetch_add(1);
                    if (i >= n_chunks) return;
                    if (done.count(i)) continue;
                    u64 y_lo = 1 + i * cfg_.chunk;
                    u64 y_hi = std::min(y_max, (i + 1) * cfg_.chunk);
                    auto blk = detail::process_chunk(cfg_, plan, post, i, y_lo, y_hi);
                    std::unique_lock<std::mutex> lk(mu);
                    ready.emplace(i, std::move(blk));
                    cv.notify_all();
                }
            } catch (...) {
                std::unique_lock<std::mutex> lk(mu);
                worker_error = std::current_exception();
                cv.notify_all();
            }
        };

        unsigned nworkers = std::max(1u, cfg_.workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(worker);

        std::vector<ChunkSummary> all(n_chunks);
        for (u64 i = 0; i < n_chunks; ++i) {
            if (auto it = done.find(i); it != done.end()) {
                all[i] = it->second;
                continue;
            }
            detail::ChunkBlock blk;
            {
                std::unique_lock<std::mutex> lk(mu);
                cv.wait(lk, [&] { return ready.count(i) != 0 || worker_error; });
                if (worker_error) {
                    lk.unlock();
                    for (auto& t : pool) t.join();
                    std::rethrow_exception(worker_error);
                }
                blk = std::move(ready.at(i));
                ready.erase(i);
            }
            if (write_records_) recf << blk.records << std::flush;
            if (!blk.survivor_lines.empty()) surf << blk.survivor_lines << std::flush;
            ckpt << "chunk " << i << " done " << blk.summary.count << "\n" << std::flush;
            all[i] = blk.summary;
            if ((i + 1) % 16 == 0 || i + 1 == n_chunks) {
                write_manifest(all, i + 1, n_chunks, nullptr);
            }
        }
        for (auto& t : pool) t.join();

        sum.stream_digest = 1469598103934665603ull;
        for (u64 i = 0; i < n_chunks; ++i) {
            sum.candidates += all[i].count;
            sum.survivors += all[i].survivors;
            for (int d = 0; d < 5; ++d) {
                sum.counts_by_disposition[d] += all[i].counts_by_disposition[d];
            }
            std::string key = std::to_string(all[i].index) + ":" + std::to_string(all[i].digest);
            sum.stream_digest = fnv1a(key, sum.stream_digest);
        }
        write_manifest(all, n_chunks, n_chunks, &sum);
        return sum;
    }

  private:
    static void prepare_truncated(const std::string& path, u64 bytes) {
        if (!std::filesystem::exists(path)) {
            std::ofstream touch(path);
            return;
        }
        if (std::filesystem::file_size(path) > bytes) std::filesystem::resize_file(path, bytes);
    }

    std::map<u64, ChunkSummary> load_done_chunks() const {
        std::map<u64, ChunkSummary> done;
        std::ifstream in(manifest_path());
        if (!in) return done;
        nlohmann::json j;
        try {
            in >> j;
        } catch (...) {
            return done;
        }
        if (!j.contains("chunks") || !config_matches(j)) return done;
        for (const auto& c : j["chunks"]) {
            ChunkSummary s;
            s.index = c.at("i").get<u64>();
            s.count = c.at("n").get<u64>();
            s.survivors = c.at("s").get<u64>();
            s.digest = c.at("d").get<u64>();
            s.rec_bytes = c.at("rb").get<u64>();
            s.sur_bytes = c.at("sb").get<u64>();
            for (int d = 0; d < 5; ++d) s.counts_by_disposition[d] = c.at("c")[d].get<u64>();
            done.emplace(s.index, s);
        }
        return done;
    }

    bool config_matches(const nlohmann::json& j) const {
        if (!j.contains("config")) return false;
        const auto& c = j["config"];
        return c.value("b1", std::string()) == cubres::to_string(cfg_.b1) &&
               c.value("b2", std::string()) == cubres::to_string(cfg_.b2) &&
               c.value("m1", std::vector<u32>()) == cfg_.m1_primes &&
               c.value("m2", std::vector<u32>()) == cfg_.m2_primes &&
               c.value("chunk", u64(0)) == cfg_.chunk &&
               c.value("table_bound", u32(0)) == cfg_.table_bound &&
               c.value("records", false) == write_records_;
    }

    void write_manifest(const std::vector<ChunkSummary>& all, u64 upto, u64 n_chunks,
                        const RunSummary* final_sum) {
        nlohmann::json j;
        j["tool"] = "cubres";
        j["version"] = "0.1.0";
        j["config"] = {
            {"b1", cubres::to_string(cfg_.b1)},
            {"b2", cubres::to_string(cfg_.b2)},
            {"m1", cfg_.m1_primes},
            {"m2", cfg_.m2_primes},
            {"chunk", cfg_.chunk},
            {"table_bound", cfg_.table_bound},
            {"workers", cfg_.workers},
            {"records", write_records_},
        };
        j["chunks_total"] = n_chunks;
        j["chunks_done"] = upto;
        auto chunks = nlohmann::json::array();
        u64 counts[5] = {0, 0, 0, 0, 0};
        u64 cand = 0, surv = 0;
        for (u64 i = 0; i < upto; ++i) {
            const ChunkSummary& s = all[i];
            nlohmann::json c = {{"i", s.index}, {"n", s.count},      {"s", s.survivors},
                                {"d", s.digest}, {"rb", s.rec_bytes}, {"sb", s.sur_bytes}};
            c["c"] = std::vector<u64>(s.counts_by_disposition, s.counts_by_disposition + 5);
            chunks.push_back(std::move(c));
            cand += s.count;
            surv += s.survivors;
            for (int d = 0; d < 5; ++d) counts[d] += s.counts_by_disposition[d];
        }
        j["chunks"] = std::move(chunks);
        j["candidates"] = cand;
        j["survivors"] = surv;
        j["counts"] = {{"RejectedThreshold", counts[0]},
                       {"RejectedComposite", counts[1]},
                       {"RejectedStructural", counts[2]},
                       {"RejectedCriterion", counts[3]},
                       {"Survivor", counts[4]}};
        j["complete"] = final_sum != nullptr;
        if (final_sum) j["stream_digest"] = final_sum->stream_digest;
        std::string tmp = manifest_path() + ".tmp";
        {
            std::ofstream out(tmp);
            out << j.dump(1) << "\n";
        }
        std::filesystem::rename(tmp, manifest_path());
    }

    SieveConfig cfg_;
    std::string outdir_;
    bool write_records_;
};

}  // namespace cubres
