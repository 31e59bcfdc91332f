from cfg.graph import Cfg, NodeKind


def _escape(text: str) -> str:
	return text.replace("\\", "\\\\").replace('"', '\\"')


def cfg_to_dot(cfg: Cfg) -> str:
	"""main 뷰 DOT (디버깅용). 구조적으로 도달 불가한 노드는 회색"""
	lines = ["digraph cfg {", "    node [shape=box];"]
	for node in cfg.nodes():
		label = f"{node.id}: {node.text or node.kind.value}"
		if node.line:
			label += f" (line {node.line})"
		attrs = [f'label="{_escape(label)}"']
		if node.kind is NodeKind.BRANCH:
			attrs.append("shape=diamond")
		elif node.kind in (NodeKind.ENTRY, NodeKind.EXIT):
			attrs.append("shape=oval")
		if not node.reachable:
			attrs.append("color=gray")
		lines.append(f"    n{node.id} [{', '.join(attrs)}];")
	for src, dst, data in sorted(cfg.graph.edges(data=True), key=lambda e: (e[0], e[1])):
		attrs = []
		if data.get("label") is not None:
			attrs.append(f'label="{"true" if data["label"] else "false"}"')
		if data.get("back"):
			attrs.append("style=dashed")
		suffix = f" [{', '.join(attrs)}]" if attrs else ""
		lines.append(f"    n{src} -> n{dst}{suffix};")
	lines.append("}")
	return "\n".join(lines) + "\n"
