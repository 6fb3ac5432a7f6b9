// SPDX-License-Identifier: Apache-2.0
#include "ocs/xlat/vendor_client.hpp"

namespace ocs::xlat {

VendorClient::VendorClient(std::unique_ptr<Converter> conv, model::ConnInfo target,
                           std::chrono::milliseconds timeout)
    : conv_(std::move(conv)), target_(std::move(target)), timeout_(timeout) {}

VendorClient::~VendorClient() { close(); }

void VendorClient::set_event_callback(EventCb cb) {
  std::lock_guard lk(cb_mu_);
  on_event_ = std::move(cb);
}

bool VendorClient::ensure_open() {
  std::lock_guard lk(mu_);
  if (sock_) return true;
  if (reader_.joinable()) reader_.join();
  try {
    auto s = net::LineSocket::connect(target_.host, target_.port,
                                      std::chrono::milliseconds(500));
    {
      std::lock_guard qlk(q_mu_);
      replies_.clear();
      reader_dead_ = false;
    }
    sock_ = std::move(s);
    reader_ = std::thread([this, sp = sock_] { reader_loop(sp); });
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool VendorClient::alive() {
  {
    std::lock_guard lk(mu_);
    if (sock_ && sock_->peer_alive()) return true;
  }
  close();
  return ensure_open();
}

void VendorClient::close() {
  std::shared_ptr<net::LineSocket> s;
  {
    std::lock_guard lk(mu_);
    s = sock_;
    sock_ = nullptr;
  }
  if (s) s->shutdown();
  if (reader_.joinable()) reader_.join();
}

void VendorClient::reader_loop(std::shared_ptr<net::LineSocket> sock) {
  for (;;) {
    auto line = sock->read_line();
    if (!line) break;
    if (conv_->is_event_line(*line)) {
      EventCb cb;
      {
        std::lock_guard lk(cb_mu_);
        cb = on_event_;
      }
      if (cb) {
        if (auto n = conv_->parse_event(*line)) cb(*n);
      }
      continue;
    }
    std::lock_guard lk(q_mu_);
    replies_.push_back(*line);
    q_cv_.notify_all();
  }
  {
    std::lock_guard lk(q_mu_);
    reader_dead_ = true;
    q_cv_.notify_all();
  }
  std::lock_guard lk(mu_);
  if (sock_ == sock) sock_ = nullptr;
}

std::optional<std::string> VendorClient::next_reply() {
  std::unique_lock lk(q_mu_);
  if (!q_cv_.wait_for(lk, timeout_, [&] { return !replies_.empty() || reader_dead_; }))
    return std::nullopt;
  if (replies_.empty()) return std::nullopt;  // connection died
  std::string line = std::move(replies_.front());
  replies_.pop_front();
  return line;
}

void VendorClient::send_or_throw(const std::vector<std::string>& lines) {
  std::shared_ptr<net::LineSocket> s;
  {
    std::lock_guard lk(mu_);
    s = sock_;
  }
  if (!s) throw VendorError("vendor device unreachable");
  if (!s->write_lines(lines)) throw VendorError("vendor connection lost");
}

std::vector<std::pair<bool, std::string>> VendorClient::apply_edits(
    const std::vector<InternalConnection>& creates, const std::vector<std::string>& deletes) {
  if (!ensure_open()) throw VendorError("vendor device unreachable");
  auto lines = conv_->edit_lines(creates, deletes);
  if (lines.empty()) return {};
  send_or_throw(lines);  // single write so the device sees one burst
  std::vector<std::pair<bool, std::string>> results;
  for (size_t i = 0; i < lines.size(); ++i) {
    auto reply = next_reply();
    if (!reply) throw VendorError("vendor reply timeout");
    std::string err;
    bool ok = conv_->parse_result(*reply, err);
    results.emplace_back(ok, err);
  }
  return results;
}

std::vector<InternalConnection> VendorClient::list() {
  if (!ensure_open()) throw VendorError("vendor device unreachable");
  send_or_throw({conv_->list_query()});
  return conv_->read_list([this] { return next_reply(); });
}

double VendorClient::power(const std::string& port) {
  if (!ensure_open()) throw VendorError("vendor device unreachable");
  send_or_throw({conv_->power_query(port)});
  auto reply = next_reply();
  if (!reply) throw VendorError("vendor reply timeout");
  double dbm = sbi::kDarkDbm;
  std::string err;
  if (!conv_->parse_power_reply(*reply, dbm, err)) throw VendorError(err);
  return dbm;
}

void VendorClient::expect_ok(const std::string& line) {
  send_or_throw({line});
  auto reply = next_reply();
  if (!reply) throw VendorError("vendor reply timeout");
  std::string err;
  if (!conv_->parse_result(*reply, err)) throw VendorError(err);
}

void VendorClient::set_monitor(const sbi::MonitorConfig& m) {
  if (!ensure_open()) throw VendorError("vendor device unreachable");
  expect_ok(conv_->monitor_line(m));
}

void VendorClient::set_alarm(const sbi::AlarmConfig& a) {
  if (!ensure_open()) throw VendorError("vendor device unreachable");
  for (const auto& line : conv_->alarm_lines(a)) expect_ok(line);
}

}  // namespace ocs::xlat
