// SPDX-License-Identifier: Apache-2.0
#include "ocs/wal/wal.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ocs::wal {

const char* to_string(RecordKind k) {
  switch (k) {
    case RecordKind::RESOURCE: return "RESOURCE";
    case RecordKind::PATH: return "PATH";
    case RecordKind::EVENT: return "EVENT";
    case RecordKind::ACTION: return "ACTION";
    case RecordKind::HANDLER: return "HANDLER";
  }
  return "RESOURCE";
}

RecordKind record_kind_from_string(const std::string& s) {
  if (s == "RESOURCE") return RecordKind::RESOURCE;
  if (s == "PATH") return RecordKind::PATH;
  if (s == "EVENT") return RecordKind::EVENT;
  if (s == "ACTION") return RecordKind::ACTION;
  if (s == "HANDLER") return RecordKind::HANDLER;
  throw std::invalid_argument("unknown record kind: " + s);
}

Wal::Wal(std::string path) : path_(std::move(path)) {
  for (const auto& r : replay()) {
    next_seq_ = std::max(next_seq_, r.seq + 1);
    ++count_;
  }
  open_for_append();
}

Wal::~Wal() {
  if (fd_ >= 0) ::close(fd_);
}

void Wal::open_for_append() {
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd_ < 0) throw std::runtime_error("cannot open WAL: " + path_);
}

uint64_t Wal::append(RecordKind kind, const std::string& op, const json& body) {
  std::lock_guard lk(mu_);
  uint64_t seq = next_seq_++;
  json rec{{"seq", seq}, {"kind", to_string(kind)}, {"op", op}, {"body", body}};
  std::string line = rec.dump();
  line += '\n';
  size_t off = 0;
  while (off < line.size()) {
    ssize_t n = ::write(fd_, line.data() + off, line.size() - off);
    if (n <= 0) throw std::runtime_error("WAL write failed");
    off += static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) throw std::runtime_error("WAL fsync failed");
  ++count_;
  return seq;
}

std::vector<Record> Wal::replay() const {
  std::lock_guard lk(mu_);
  std::vector<Record> out;
  std::ifstream in(path_);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;  // torn tail write after a crash
    Record r;
    r.seq = j.value("seq", 0ULL);
    r.kind = record_kind_from_string(j.value("kind", "RESOURCE"));
    r.op = j.value("op", "put");
    r.body = j.value("body", json::object());
    out.push_back(std::move(r));
  }
  return out;
}

void Wal::compact(const std::vector<Record>& live) {
  std::lock_guard lk(mu_);
  const std::string tmp = path_ + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    uint64_t seq = 1;
    for (const auto& r : live) {
      json rec{{"seq", seq++}, {"kind", to_string(r.kind)}, {"op", r.op}, {"body", r.body}};
      out << rec.dump() << "\n";
    }
    out.flush();
  }
  if (fd_ >= 0) ::close(fd_);
  if (std::rename(tmp.c_str(), path_.c_str()) != 0)
    throw std::runtime_error("WAL compaction rename failed");
  next_seq_ = live.size() + 1;
  count_ = live.size();
  open_for_append();
}

uint64_t Wal::record_count() const {
  std::lock_guard lk(mu_);
  return count_;
}

}  // namespace ocs::wal
