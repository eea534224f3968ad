#pragma once

#include <string>

#include "hybridsim/errors.hpp"

namespace hybridsim::kernel {

/// Static type of a model quantity.  `Any` is used for slots whose type is
/// only known once wiring is resolved (imports and shared expressions seen
/// from the outside).
enum class ValueType { Number, Boolean, Any };

const char* to_string(ValueType type);

/// Runtime value: a double or a bool.  Booleans coerce to 0/1 in numeric
/// context (so `power * heaterOn` works); numbers never coerce to booleans.
class Value {
public:
    Value() = default;
    static Value number(double v) { return Value(v); }
    static Value boolean(bool v) { return Value(v); }

    [[nodiscard]] bool is_boolean() const noexcept { return boolean_; }

    [[nodiscard]] double as_number() const noexcept {
        return boolean_ ? (flag_ ? 1.0 : 0.0) : number_;
    }

    [[nodiscard]] bool as_boolean() const {
        if (!boolean_)
            throw EvaluationError("expected a boolean value, got number "
                                  + std::to_string(number_));
        return flag_;
    }

    [[nodiscard]] bool equals(const Value& other) const noexcept {
        if (boolean_ != other.boolean_) return false;
        return boolean_ ? flag_ == other.flag_ : number_ == other.number_;
    }

private:
    explicit Value(double v) : boolean_(false), number_(v) {}
    explicit Value(bool v) : boolean_(true), flag_(v) {}

    bool boolean_ = false;
    double number_ = 0.0;
    bool flag_ = false;
};

}  // namespace hybridsim::kernel
