// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>
#include <string>
#include <vector>

#include "ocs/model/types.hpp"

namespace ocs::wal {

using model::json;

enum class RecordKind { RESOURCE, PATH, EVENT, ACTION, HANDLER };

const char* to_string(RecordKind k);
RecordKind record_kind_from_string(const std::string& s);

struct Record {
  uint64_t seq = 0;
  RecordKind kind = RecordKind::RESOURCE;
  std::string op;  // "put" | "delete"
  json body;
};

/// Append-only JSON-lines write-ahead log with fsync-per-record durability.
/// Replaying records in seq order reconstructs the exact store.
class Wal {
 public:
  explicit Wal(std::string path);
  ~Wal();

  /// Appends durably; the record is on disk when this returns.
  uint64_t append(RecordKind kind, const std::string& op, const json& body);

  /// Reads every record currently on disk, in seq order.
  std::vector<Record> replay() const;

  /// Atomically replaces the log with the given records (fresh seqs).
  void compact(const std::vector<Record>& live);

  uint64_t record_count() const;
  const std::string& path() const { return path_; }

 private:
  void open_for_append();

  std::string path_;
  mutable std::mutex mu_;
  int fd_ = -1;
  uint64_t next_seq_ = 1;
  uint64_t count_ = 0;
};

}  // namespace ocs::wal
