// Status-poll cadence: 2 s between polls, doubling on consecutive
// network failures, capped at 30 s, reset on any successful poll.

export class PollBackoff {
  private current: number;

  constructor(
    private readonly baseMs = 2000,
    private readonly capMs = 30000,
  ) {
    this.current = baseMs;
  }

  intervalMs(): number {
    return this.current;
  }

  recordFailure(): void {
    this.current = Math.min(this.current * 2, this.capMs);
  }

  recordSuccess(): void {
    this.current = this.baseMs;
  }
}
