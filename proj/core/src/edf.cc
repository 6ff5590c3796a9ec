// Copyright 2026 The Somno Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "somno/edf.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include "somno/error.h"

namespace somno {
namespace {

// Header text is ASCII; anything outside the printable range becomes '?'.
std::string ascii_field(std::span<const std::uint8_t> bytes) {
  std::string out;
  out.reserve(bytes.size());
  for (std::uint8_t b : bytes) {
    out.push_back(b >= 32 && b <= 126 ? static_cast<char>(b) : '?');
  }
  const auto first = out.find_first_not_of(' ');
  if (first == std::string::npos) return {};
  const auto last = out.find_last_not_of(' ');
  return out.substr(first, last - first + 1);
}

class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t width) {
    if (pos_ + width > bytes_.size()) {
      throw ParseError("truncated EDF header", static_cast<std::int64_t>(pos_));
    }
    auto field = bytes_.subspan(pos_, width);
    pos_ += width;
    return field;
  }

  std::string text(std::size_t width) { return ascii_field(take(width)); }

  std::int64_t integer(std::size_t width, const char* name) {
    const auto at = static_cast<std::int64_t>(pos_);
    const std::string s = text(width);
    std::int64_t value = 0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError(std::string("non-numeric ") + name + " field '" + s + "'",
                       at);
    }
    return value;
  }

  double real(std::size_t width, const char* name) {
    const auto at = static_cast<std::int64_t>(pos_);
    const std::string s = text(width);
    double value = 0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() ||
        !std::isfinite(value)) {
      throw ParseError(std::string("non-numeric ") + name + " field '" + s + "'",
                       at);
    }
    return value;
  }

  Rational decimal(std::size_t width, const char* name) {
    const auto at = static_cast<std::int64_t>(pos_);
    const std::string s = text(width);
    try {
      return Rational::parse_decimal(s);
    } catch (const Error&) {
      throw ParseError(std::string("non-numeric ") + name + " field '" + s + "'",
                       at);
    }
  }

  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int two_digits(const std::string& s, std::size_t at, std::int64_t offset) {
  if (s.size() < at + 2 || s[at] < '0' || s[at] > '9' || s[at + 1] < '0' ||
      s[at + 1] > '9') {
    throw ParseError("malformed date/time field '" + s + "'", offset);
  }
  return (s[at] - '0') * 10 + (s[at + 1] - '0');
}

std::chrono::sys_seconds parse_start(const std::string& date,
                                     const std::string& time) {
  using namespace std::chrono;
  const int dd = two_digits(date, 0, 168);
  const int mm = two_digits(date, 3, 168);
  const int yy = two_digits(date, 6, 168);
  const int hh = two_digits(time, 0, 176);
  const int mi = two_digits(time, 3, 176);
  const int ss = two_digits(time, 6, 176);
  // Two-digit years clip at 1985 per the EDF convention.
  const year_month_day ymd{year{yy >= 85 ? 1900 + yy : 2000 + yy},
                           month{static_cast<unsigned>(mm)},
                           day{static_cast<unsigned>(dd)}};
  if (!ymd.ok()) throw ParseError("invalid start date '" + date + "'", 168);
  if (hh > 23 || mi > 59 || ss > 60) {
    throw ParseError("invalid start time '" + time + "'", 176);
  }
  return sys_days{ymd} + hours{hh} + minutes{mi} + seconds{ss};
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

std::vector<std::uint8_t> read_prefix(const std::filesystem::path& path,
                                      std::size_t max_bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> buf(max_bytes);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(max_bytes));
  buf.resize(static_cast<std::size_t>(in.gcount()));
  return buf;
}

// Checks the data section size against the header and returns the number of
// complete data records.
std::int64_t checked_record_count(const EdfHeader& header,
                                  std::size_t file_size) {
  const std::int64_t record_bytes = header.record_bytes();
  const auto data_bytes =
      static_cast<std::int64_t>(file_size) - header.header_bytes;
  if (data_bytes < 0) {
    throw ParseError("file shorter than its header", static_cast<std::int64_t>(file_size));
  }
  if (header.n_data_records < 0) return data_bytes / record_bytes;
  const std::int64_t expected = header.n_data_records * record_bytes;
  if (expected != data_bytes) {
    throw ParseError("record count " + std::to_string(header.n_data_records) +
                         " inconsistent with file size " +
                         std::to_string(file_size),
                     236);
  }
  return header.n_data_records;
}

void reject_discontinuous(const EdfHeader& header,
                          const std::filesystem::path& path) {
  if (header.is_discontinuous()) {
    throw Error("'" + path.string() +
                "' is EDF+D (discontinuous), which is not supported");
  }
}

std::int64_t signal_offset(const EdfHeader& header, std::size_t signal) {
  std::int64_t off = 0;
  for (std::size_t j = 0; j < signal; ++j) {
    off += 2 * static_cast<std::int64_t>(header.signals[j].samples_per_record);
  }
  return off;
}

}  // namespace

double SignalSpec::to_physical(int digital) const {
  // std::lerp is exact at both ends and monotone in between.
  const double t = static_cast<double>(digital - digital_min) /
                   static_cast<double>(digital_max - digital_min);
  return std::lerp(physical_min, physical_max, t);
}

bool EdfHeader::is_edf_plus() const {
  return reserved.rfind("EDF+C", 0) == 0 || reserved.rfind("EDF+D", 0) == 0;
}

bool EdfHeader::is_discontinuous() const {
  return reserved.rfind("EDF+D", 0) == 0;
}

std::optional<std::size_t> EdfHeader::annotation_signal() const {
  for (std::size_t i = 0; i < signals.size(); ++i) {
    if (signals[i].is_annotation()) return i;
  }
  return std::nullopt;
}

std::int64_t EdfHeader::record_bytes() const {
  std::int64_t total = 0;
  for (const auto& s : signals) total += 2 * std::int64_t{s.samples_per_record};
  return total;
}

Rational EdfHeader::sampling_rate(std::size_t signal) const {
  if (record_duration_s.is_zero()) return Rational(0);
  return Rational(signals.at(signal).samples_per_record) / record_duration_s;
}

EdfHeader parse_edf_header(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < static_cast<std::size_t>(kEdfFixedHeaderBytes)) {
    throw ParseError("truncated EDF header: " + std::to_string(bytes.size()) +
                         " bytes, need at least 256",
                     static_cast<std::int64_t>(bytes.size()));
  }
  if (bytes[0] == 0xFF) {
    throw ParseError("BDF (24-bit) files are not supported", 0);
  }
  HeaderCursor cur(bytes);
  EdfHeader h;
  h.version = cur.text(8);
  if (h.version != "0") {
    throw ParseError("not an EDF file: version field '" + h.version + "'", 0);
  }
  h.patient_id = cur.text(80);
  h.recording_id = cur.text(80);
  h.start_date = cur.text(8);
  h.start_time = cur.text(8);
  h.start_datetime = parse_start(h.start_date, h.start_time);
  h.header_bytes = static_cast<int>(cur.integer(8, "header bytes"));
  h.reserved = cur.text(44);
  h.n_data_records = cur.integer(8, "number of data records");
  if (h.n_data_records < -1) {
    throw ParseError("negative number of data records", 236);
  }
  h.record_duration_s = cur.decimal(8, "record duration");
  if (h.record_duration_s < Rational(0)) {
    throw ParseError("negative record duration", 244);
  }
  const std::int64_t ns = cur.integer(4, "number of signals");
  if (ns < 1 || ns > 4096) {
    throw ParseError("number of signals must be in [1, 4096], got " +
                         std::to_string(ns),
                     252);
  }
  if (h.header_bytes != kEdfFixedHeaderBytes + kEdfSignalHeaderBytes * ns) {
    throw ParseError("header bytes field " + std::to_string(h.header_bytes) +
                         " does not match 256 + 256 * " + std::to_string(ns),
                     184);
  }
  if (bytes.size() < static_cast<std::size_t>(h.header_bytes)) {
    throw ParseError("truncated EDF header: " + std::to_string(bytes.size()) +
                         " of " + std::to_string(h.header_bytes) + " bytes",
                     static_cast<std::int64_t>(bytes.size()));
  }

  const auto n = static_cast<std::size_t>(ns);
  h.signals.resize(n);
  for (auto& s : h.signals) s.label = cur.text(16);
  for (auto& s : h.signals) s.transducer = cur.text(80);
  for (auto& s : h.signals) s.physical_dimension = cur.text(8);
  for (auto& s : h.signals) s.physical_min = cur.real(8, "physical minimum");
  for (auto& s : h.signals) s.physical_max = cur.real(8, "physical maximum");
  for (auto& s : h.signals) {
    s.digital_min = static_cast<int>(cur.integer(8, "digital minimum"));
  }
  const std::size_t digital_max_at = cur.pos();
  for (auto& s : h.signals) {
    s.digital_max = static_cast<int>(cur.integer(8, "digital maximum"));
  }
  for (auto& s : h.signals) s.prefiltering = cur.text(80);
  const std::size_t spr_at = cur.pos();
  for (auto& s : h.signals) {
    s.samples_per_record = static_cast<int>(cur.integer(8, "samples per record"));
  }
  for (auto& s : h.signals) s.reserved = cur.text(32);

  bool annotation_only = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = h.signals[i];
    const auto at = [&](std::size_t base) {
      return static_cast<std::int64_t>(base + 8 * i);
    };
    if (s.digital_min >= s.digital_max) {
      throw ParseError("signal '" + s.label + "': digital minimum " +
                           std::to_string(s.digital_min) +
                           " not below digital maximum " +
                           std::to_string(s.digital_max),
                       at(digital_max_at));
    }
    if (s.physical_min == s.physical_max) {
      throw ParseError("signal '" + s.label +
                           "': physical minimum equals physical maximum",
                       at(digital_max_at - 24 * n));
    }
    if (s.samples_per_record < 1) {
      throw ParseError("signal '" + s.label + "': samples per record < 1",
                       at(spr_at));
    }
    annotation_only = annotation_only && s.is_annotation();
  }
  if (h.record_duration_s.is_zero() && !annotation_only) {
    throw ParseError("record duration must be positive", 244);
  }
  return h;
}

EdfHeader read_edf_header(const std::filesystem::path& path) {
  auto prefix = read_prefix(path, kEdfFixedHeaderBytes);
  if (prefix.size() < static_cast<std::size_t>(kEdfFixedHeaderBytes)) {
    return parse_edf_header(prefix);  // throws "truncated"
  }
  // Peek at the signal count to size the full header read.
  std::string ns_text(prefix.begin() + 252, prefix.begin() + 256);
  int ns = 0;
  const auto first = ns_text.find_first_not_of(' ');
  if (first != std::string::npos) {
    std::from_chars(ns_text.data() + first, ns_text.data() + ns_text.size(), ns);
  }
  if (ns < 1 || ns > 4096) return parse_edf_header(prefix);  // throws
  return parse_edf_header(read_prefix(
      path, kEdfFixedHeaderBytes + static_cast<std::size_t>(ns) * kEdfSignalHeaderBytes));
}

Recording read_edf_signals(const std::filesystem::path& path,
                           const EdfHeader& header,
                           std::span<const std::string> selection) {
  reject_discontinuous(header, path);
  std::vector<std::size_t> wanted;
  if (selection.empty()) {
    for (std::size_t i = 0; i < header.signals.size(); ++i) {
      if (!header.signals[i].is_annotation()) wanted.push_back(i);
    }
  } else {
    for (const auto& label : selection) {
      const auto it = std::find_if(
          header.signals.begin(), header.signals.end(),
          [&](const SignalSpec& s) { return s.label == label; });
      if (it == header.signals.end()) {
        throw Error("'" + path.string() + "' has no signal labelled '" + label +
                    "'");
      }
      wanted.push_back(static_cast<std::size_t>(it - header.signals.begin()));
    }
  }

  const auto bytes = read_file(path);
  const std::int64_t n_records = checked_record_count(header, bytes.size());
  const std::int64_t record_bytes = header.record_bytes();

  Recording rec;
  rec.start_datetime = header.start_datetime;
  rec.source_path = path.string();
  rec.recording_id = path.stem().string();
  for (std::size_t idx : wanted) {
    const SignalSpec& spec = header.signals[idx];
    Channel ch;
    ch.label = spec.label;
    ch.sampling_rate = header.sampling_rate(idx);
    ch.samples.resize(static_cast<std::size_t>(n_records) *
                      static_cast<std::size_t>(spec.samples_per_record));
    const std::int64_t off = signal_offset(header, idx);
    std::size_t k = 0;
    for (std::int64_t r = 0; r < n_records; ++r) {
      const std::uint8_t* p =
          bytes.data() + header.header_bytes + r * record_bytes + off;
      for (int j = 0; j < spec.samples_per_record; ++j, p += 2) {
        const auto digital = static_cast<std::int16_t>(
            static_cast<std::uint16_t>(p[0]) |
            static_cast<std::uint16_t>(p[1]) << 8);
        ch.samples[k++] = spec.to_physical(digital);
      }
    }
    rec.channels.push_back(std::move(ch));
  }
  return rec;
}

std::vector<Annotation> parse_edfplus_annotations(
    const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const EdfHeader header = parse_edf_header(bytes);
  reject_discontinuous(header, path);
  const auto ann = header.annotation_signal();
  if (!ann) {
    throw Error("'" + path.string() + "' has no EDF Annotations signal");
  }
  const std::int64_t n_records = checked_record_count(header, bytes.size());
  const std::int64_t record_bytes = header.record_bytes();
  const std::int64_t off = signal_offset(header, *ann);
  const auto width =
      static_cast<std::size_t>(2 * header.signals[*ann].samples_per_record);

  std::vector<Annotation> out;
  for (std::int64_t r = 0; r < n_records; ++r) {
    const std::span<const std::uint8_t> block(
        bytes.data() + header.header_bytes + r * record_bytes + off, width);
    auto part = parse_tal_block(block, r);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Annotation& a, const Annotation& b) {
                     return a.onset_s < b.onset_s;
                   });
  return out;
}

}  // namespace somno
