#include <algorithm>
#include <array>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/oracle_mc.hpp"

namespace spdc {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'P', 'D', 'C', 'T', 'T', '0', '1'};
constexpr std::size_t kRecordBytes = 9;

void put_u64_le(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

std::uint64_t get_u64_le(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[i]) << (8 * i);
  return v;
}

}  // namespace

void write_timetags(std::ostream& out, const TimeTagStream& stream) {
  unsigned char header[16];
  std::memcpy(header, kMagic.data(), kMagic.size());
  put_u64_le(header + 8, stream.records.size());
  out.write(reinterpret_cast<const char*>(header), sizeof header);

  // Chunked to keep the temporary small for long streams.
  constexpr std::size_t kChunk = 1 << 16;
  std::vector<unsigned char> buffer(kChunk * kRecordBytes);
  for (std::size_t begin = 0; begin < stream.records.size(); begin += kChunk) {
    const std::size_t n = std::min(kChunk, stream.records.size() - begin);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = stream.records[begin + i];
      put_u64_le(buffer.data() + i * kRecordBytes, r.time_ps);
      buffer[i * kRecordBytes + 8] = static_cast<unsigned char>(r.channel);
    }
    out.write(reinterpret_cast<const char*>(buffer.data()),
              static_cast<std::streamsize>(n * kRecordBytes));
  }
  if (!out) throw FormatError("failed writing time-tag stream");
}

TimeTagStream read_timetags(std::istream& in) {
  unsigned char header[16];
  if (!in.read(reinterpret_cast<char*>(header), sizeof header)) {
    throw FormatError("time-tag file shorter than its 16-byte header");
  }
  if (std::memcmp(header, kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("time-tag file has wrong magic (expected SPDCTT01)");
  }
  const std::uint64_t count = get_u64_le(header + 8);

  TimeTagStream stream;
  stream.records.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 26)));
  unsigned char record[kRecordBytes];
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!in.read(reinterpret_cast<char*>(record), kRecordBytes)) {
      throw FormatError("time-tag file truncated: header announces " + std::to_string(count) +
                        " records, found " + std::to_string(i));
    }
    const unsigned char ch = record[8];
    if (ch > 2) throw FormatError("time-tag record with unknown channel id " + std::to_string(ch));
    stream.records.push_back({get_u64_le(record), static_cast<Channel>(ch)});
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("time-tag file has trailing bytes beyond the announced record count");
  }
  if (!stream.records.empty()) stream.duration = stream.records.back().seconds();
  for (std::size_t i = 1; i < stream.records.size(); ++i) {
    if (stream.records[i].time_ps < stream.records[i - 1].time_ps) {
      throw FormatError("time-tag records are not in time order");
    }
  }
  return stream;
}

}  // namespace spdc
