"""
WSGI Entry Point for Production Deployment

Usage with Gunicorn:
    gunicorn wsgi:app --bind 0.0.0.0:5000 --workers 4

SECURITY NOTES:
    - This entry point does NOT enable debug mode
    - For development, use: python app.py with FLASK_DEBUG=true
    - Set RATELIMIT_STORAGE_URI=redis://... so rate limits are shared across workers
"""

from app import app

if __name__ == "__main__":
    app.run()
