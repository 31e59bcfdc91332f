from cfg.builder import DEFAULT_INLINE_DEPTH, build_cfg
from cfg.dot import cfg_to_dot
from cfg.errors import CfgError, InlineDepthExceeded, MissingMain, RecursionBeyondBound, UnknownCalleeArity, UnsupportedConstruct
from cfg.graph import Cfg, CallSite, CfgNode, FunctionGraph, NodeKind, SlotInfo, call_sites, format_stack
