from utils.errors import IdccError
from utils.settings import Settings, load_settings
