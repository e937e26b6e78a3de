// Pure DOM code, no web API calls.
function toggle(el) {
  el.classList.toggle('open');
  return el;
}
document.querySelectorAll('.menu').forEach(toggle);
