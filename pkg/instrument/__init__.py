from instrument.annotate import AUX_PREFIX, InstrumentedDependency, aux_name, call_graph, instrument, instrument_program
from instrument.errors import InstrumentError, NameClash, OrderingParadox
