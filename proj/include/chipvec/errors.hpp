#pragma once

#include <stdexcept>
#include <string>

namespace chipvec {

// Base class for all domain errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class EmptyPinSet : public Error {
public:
  EmptyPinSet() : Error("empty pin set") {}
};

class OutOfGrid : public Error {
public:
  explicit OutOfGrid(const std::string& msg) : Error("out of grid: " + msg) {}
};

class ParseError : public Error {
public:
  ParseError(int line, const std::string& msg)
      : Error("parse error at line " + std::to_string(line) + ": " + msg), line(line) {}
  int line;
};

class DuplicateName : public Error {
public:
  explicit DuplicateName(const std::string& name) : Error("duplicate name: " + name) {}
};

class UnknownMaster : public Error {
public:
  explicit UnknownMaster(const std::string& name) : Error("unknown master: " + name) {}
};

class GeometryError : public Error {
public:
  explicit GeometryError(const std::string& msg) : Error("geometry error: " + msg) {}
};

class CapacityError : public Error {
public:
  explicit CapacityError(const std::string& msg) : Error("capacity error: " + msg) {}
};

class ConnectivityError : public Error {
public:
  ConnectivityError(const std::string& net, const std::string& pins)
      : Error("disconnected routing in net " + net + ", unreached pins: " + pins) {}
};

class TechError : public Error {
public:
  explicit TechError(const std::string& msg) : Error("tech error: " + msg) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& field_, const std::string& msg = "")
      : Error("invalid config field '" + field_ + "'" + (msg.empty() ? "" : ": " + msg)),
        field(field_) {}
  std::string field;
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error("io error: " + msg) {}
};

class CorruptBundle : public Error {
public:
  explicit CorruptBundle(const std::string& file)
      : Error("corrupt bundle file: " + file), file(file) {}
  std::string file;
};

class NotABundle : public Error {
public:
  explicit NotABundle(const std::string& msg) : Error("not a bundle: " + msg) {}
};

class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error("shape error: " + msg) {}
};

class IncompleteBundle : public Error {
public:
  explicit IncompleteBundle(const std::string& msg) : Error("incomplete bundle: " + msg) {}
};

class IncomparableDesigns : public Error {
public:
  explicit IncomparableDesigns(const std::string& msg)
      : Error("incomparable designs: " + msg) {}
};

class EmptyDataset : public Error {
public:
  explicit EmptyDataset(const std::string& msg) : Error("empty dataset: " + msg) {}
};

class GridTooSmall : public Error {
public:
  explicit GridTooSmall(const std::string& msg) : Error("grid too small: " + msg) {}
};

class ConstantColumn : public Error {
public:
  explicit ConstantColumn(const std::string& name)
      : Error("constant column: " + name), name(name) {}
  std::string name;
};

class InvalidMap : public Error {
public:
  explicit InvalidMap(const std::string& msg) : Error("invalid map: " + msg) {}
};

class InvalidObjective : public Error {
public:
  explicit InvalidObjective(const std::string& msg) : Error("invalid objective: " + msg) {}
};

class RefError : public Error {
public:
  explicit RefError(const std::string& msg) : Error("reference point error: " + msg) {}
};

class UsageError : public Error {
public:
  explicit UsageError(const std::string& msg) : Error("usage error: " + msg) {}
};

}  // namespace chipvec
