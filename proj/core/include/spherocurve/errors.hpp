#pragma once

#include <stdexcept>
#include <string>

namespace spherocurve {

// Every geometric failure carries a stable name; the CLI prints it verbatim
// on stderr and maps it to an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(name + ": " + what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define SPHEROCURVE_ERROR(Type)                                                \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what) : Error(#Type, what) {}         \
    }

SPHEROCURVE_ERROR(PreconditionError);
SPHEROCURVE_ERROR(DensityError);
SPHEROCURVE_ERROR(CoverError);
SPHEROCURVE_ERROR(OrderError);
SPHEROCURVE_ERROR(ZeroVectorError);
SPHEROCURVE_ERROR(ChartError);
SPHEROCURVE_ERROR(ImmersionError);
SPHEROCURVE_ERROR(DegeneracyError);
SPHEROCURVE_ERROR(JacobiError);
SPHEROCURVE_ERROR(ConvexityError);
SPHEROCURVE_ERROR(ConditionLError);
SPHEROCURVE_ERROR(ResolutionError);
SPHEROCURVE_ERROR(CellError);
SPHEROCURVE_ERROR(EmptyFeasibleError);
SPHEROCURVE_ERROR(PoleError);
SPHEROCURVE_ERROR(RangeError);
SPHEROCURVE_ERROR(SchemaError);

#undef SPHEROCURVE_ERROR

} // namespace spherocurve
