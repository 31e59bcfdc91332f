from depspec.errors import DuplicateId, InvalidSpec, SelfDependency, SpecError, SpecSyntaxError
from depspec.graph import Violation, dependency_graph, require_valid, spec_to_dot, topological_order, validate_spec
from depspec.model import DependencySpec, TemporalDependency, emit_spec, parse_spec, parse_spec_file
