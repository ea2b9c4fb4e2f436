#pragma once

#include "lpsflow/basis.hpp"
#include "lpsflow/boundary.hpp"
#include "lpsflow/diagnostics.hpp"
#include "lpsflow/errors.hpp"
#include "lpsflow/field.hpp"
#include "lpsflow/linear_solver.hpp"
#include "lpsflow/mesh.hpp"
#include "lpsflow/operators.hpp"
#include "lpsflow/stabilization.hpp"
#include "lpsflow/stepper.hpp"
#include "lpsflow/tensor_kernel.hpp"
