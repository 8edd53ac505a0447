#pragma once

#include <qpencil/closed_form.hpp>
#include <qpencil/conic_pencil.hpp>
#include <qpencil/cubic_pencil.hpp>
#include <qpencil/error.hpp>
#include <qpencil/poly_core.hpp>
#include <qpencil/reference_table.hpp>
#include <qpencil/root_oracle.hpp>
