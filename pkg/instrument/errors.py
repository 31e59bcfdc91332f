from utils.errors import IdccError


class InstrumentError(IdccError):
	code = "instrument"


class NameClash(InstrumentError):
	code = "name-clash"


class OrderingParadox(InstrumentError):
	code = "ordering-paradox"
