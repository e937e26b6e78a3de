(function (jQuery) {
  var base = 'https://api.instagram.com/v1/users/';
  function profile(id) {
    return jQuery.get(base + id, {access_token: token});
  }
  window.profile = profile;
})(jQuery);
