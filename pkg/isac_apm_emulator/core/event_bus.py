"""
Event Bus - Publish/Subscribe progress and stage notifications.

Engines (synthesis, estimation) publish what they are doing without knowing
whether a progress bar, a log line or nothing at all consumes it. The CLI
subscribes its tqdm bars here; library users can subscribe their own hooks.

Usage:
    from isac_apm_emulator.core import event_bus, Events

    def on_progress(label, done, total):
        print(f"{label}: {done}/{total}")

    with event_bus.listening(Events.SYNTHESIS_PROGRESS, on_progress):
        synthesize_snapshot(scenario, snapshot)
"""

from __future__ import annotations

import threading
from collections import defaultdict
from contextlib import contextmanager
from typing import Any, Callable, Iterator

from ..utils.logger import get_logger

logger = get_logger(__name__)


# Type alias for event handlers
EventHandler = Callable[..., None]


class EventBus:
    """
    Central event bus for publish/subscribe communication.

    Publishing is thread-safe: synthesis workers report progress from pool
    threads while the main thread owns the subscribers. Handlers run on the
    publishing thread, in subscription order.
    """

    def __init__(self) -> None:
        self._subscribers: dict[str, list[EventHandler]] = defaultdict(list)
        self._lock = threading.RLock()

    def subscribe(self, event: str, handler: EventHandler) -> None:
        """
        Subscribe to an event.

        Args:
            event: One of the names in core.constants.Events
            handler: Callback receiving the published keyword arguments
        """
        with self._lock:
            self._subscribers[event].append(handler)
        logger.debug(f"Subscribed to '{event}': {getattr(handler, '__name__', handler)}")

    def unsubscribe(self, event: str, handler: EventHandler) -> bool:
        """
        Unsubscribe from an event.

        Returns:
            True if the handler was found and removed, False otherwise
        """
        with self._lock:
            handlers = self._subscribers.get(event, [])
            if handler not in handlers:
                return False
            handlers.remove(handler)
            return True

    @contextmanager
    def listening(self, event: str, handler: EventHandler) -> Iterator[None]:
        """Keep ``handler`` subscribed for the duration of a ``with`` block."""
        self.subscribe(event, handler)
        try:
            yield
        finally:
            self.unsubscribe(event, handler)

    def publish(self, event: str, **kwargs: Any) -> int:
        """
        Publish an event to all subscribers.

        A failing handler is logged and skipped; it never aborts the engine
        that published the event.

        Args:
            event: The event name to publish
            **kwargs: Data to pass to handlers

        Returns:
            Number of handlers that ran without raising
        """
        with self._lock:
            handlers = list(self._subscribers.get(event, ()))

        called = 0
        for handler in handlers:
            try:
                handler(**kwargs)
                called += 1
            except Exception as e:
                logger.error(f"Error in handler for '{event}': {e}", exc_info=True)
        return called

    def has_subscribers(self, event: str) -> bool:
        """Check if an event has any subscribers."""
        with self._lock:
            return bool(self._subscribers.get(event))


# Global event bus instance
event_bus = EventBus()
